"""Multiplicativity checks on Fourier coefficients.

For indices coprime to the level the coefficients of a Hecke eigenform obey

    a_m a_n = a_1 sum_{d | (m, n)} a_{m n / d^2},

so the maximal violation over all usable pairs is a cheap, sharp consistency
test: spurious solutions of the linear system fail it by orders of magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientCoefficients, ZeroFirstCoefficient
from .groups import prime_factors

__all__ = ["HeckeReport", "multiplicativity_defect", "hecke_eigenvalues"]


@dataclass(frozen=True)
class HeckeReport:
    defect: float
    pairs_checked: tuple
    t: tuple                  # derived eigenvalues a_n / a_1


def hecke_eigenvalues(coeffs) -> tuple:
    """t_n = a_n / a_1 (coeffs[k] holds a_{k+1})."""
    a = np.asarray(coeffs)
    if a.size == 0 or a[0] == 0:
        raise ZeroFirstCoefficient("cannot normalize: a_1 = 0")
    return tuple(a / a[0])


def multiplicativity_defect(coeffs, N: int, max_index: int) -> HeckeReport:
    """Max |a_m a_n - a_1 sum_{d|(m,n)} a_{mn/d^2}| over admissible pairs.

    Pairs satisfy 2 <= m <= n, gcd(m, N) = gcd(n, N) = 1 and mn <= max_index
    so no extrapolated coefficient is touched; the defect is normalized by
    max |a_k| to stay scale-free.
    """
    prime_factors(N)  # validates the level
    a = np.asarray(coeffs)
    L = min(len(a), int(max_index))
    if L < 1:
        raise InsufficientCoefficients("no coefficients supplied")
    scale = float(np.max(np.abs(a[:L])))
    if scale == 0.0:
        raise InsufficientCoefficients("all coefficients vanish")
    worst = 0.0
    pairs = []
    for m in range(2, L + 1):
        if math.gcd(m, N) != 1:
            continue
        for n in range(m, L // m + 1):
            if math.gcd(n, N) != 1:
                continue
            g = math.gcd(m, n)
            rhs = sum(a[m * n // (d * d) - 1] for d in range(1, g + 1) if g % d == 0)
            violation = abs(a[m - 1] * a[n - 1] - a[0] * rhs)
            pairs.append((m, n))
            worst = max(worst, float(violation))
    if not pairs:
        raise InsufficientCoefficients(
            f"no index pair coprime to {N} with product <= {L}")
    return HeckeReport(defect=worst / scale, pairs_checked=tuple(pairs),
                       t=hecke_eigenvalues(a[:L]))
