import math

import numpy as np
import pytest

from moonmaass.errors import InsufficientCoefficients, ZeroFirstCoefficient
from moonmaass.hecke import hecke_eigenvalues, multiplicativity_defect


def _factorize(n):
    out = []
    m, p = n, 2
    while p * p <= m:
        k = 0
        while m % p == 0:
            m //= p
            k += 1
        if k:
            out.append((p, k))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


def _synthetic(N, L, seed, junk=0.3):
    """Multiplicative sequence obeying the Hecke recursion away from N."""
    rng = np.random.default_rng(seed)
    t = {}

    def tp(p):
        if p not in t:
            t[p] = float(rng.uniform(-2.0, 2.0))
        return t[p]

    def power(p, k):
        if k == 0:
            return 1.0
        if k == 1:
            return tp(p)
        return tp(p) * power(p, k - 1) - power(p, k - 2)

    a = [1.0]
    for n in range(2, L + 1):
        val = 1.0
        for p, k in _factorize(n):
            val *= junk ** k if N % p == 0 else power(p, k)
        a.append(val)
    return np.array(a)


def test_synthetic_sequences_pass():
    # At level 6 only indices coprime to 6 qualify, so pairs are scarce.
    for N, seed, min_pairs in [(1, 0, 30), (5, 1, 20), (6, 2, 4), (6, 3, 4)]:
        a = _synthetic(N, 60, seed)
        rep = multiplicativity_defect(a, N, 60)
        assert rep.defect < 1e-13, (N, seed, rep.defect)
        assert len(rep.pairs_checked) >= min_pairs


def test_defect_catches_perturbation():
    a = _synthetic(5, 60, 7)
    rep0 = multiplicativity_defect(a, 5, 60)
    b = a.copy()
    b[1] += 1e-3  # a_2
    rep1 = multiplicativity_defect(b, 5, 60)
    assert rep1.defect > 1e-5
    assert rep1.defect > 100.0 * max(rep0.defect, 1e-15)


def test_indices_sharing_level_factors_are_ignored():
    a = _synthetic(6, 60, 11)
    rep0 = multiplicativity_defect(a, 6, 60)
    b = a.copy()
    for n in (2, 3, 4, 6, 9, 12):  # all share a factor with 6
        b[n - 1] = 999.0
    rep1 = multiplicativity_defect(b, 6, 60)
    assert rep1.pairs_checked == rep0.pairs_checked
    for m, n in rep1.pairs_checked:
        assert math.gcd(m, 6) == 1 and math.gcd(n, 6) == 1
    # Junk rescales the normalization but cannot create a violation.
    assert rep1.defect * 999.0 <= rep0.defect * max(np.abs(a)) * 1.01 + 1e-12


def test_pair_budget():
    a = _synthetic(6, 30, 13)
    # Smallest admissible pair at level 6 is (5, 5), needing index 25.
    with pytest.raises(InsufficientCoefficients):
        multiplicativity_defect(a[:24], 6, 24)
    rep = multiplicativity_defect(a[:25], 6, 25)
    assert rep.pairs_checked == ((5, 5),)


def test_insufficient_and_zero():
    with pytest.raises(InsufficientCoefficients):
        multiplicativity_defect(np.array([]), 6, 10)
    with pytest.raises(InsufficientCoefficients):
        multiplicativity_defect(np.zeros(30), 6, 30)
    with pytest.raises(ZeroFirstCoefficient):
        hecke_eigenvalues(np.array([0.0, 1.0]))


def test_hecke_eigenvalues_normalization():
    a = np.array([2.0, 4.0, -1.0])
    assert hecke_eigenvalues(a) == (1.0, 2.0, -0.5)
