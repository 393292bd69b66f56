import math

import pytest
from scipy.optimize import brentq

from moonmaass.errors import RangeError
from moonmaass.turing import consecutiveness, inject, remove
from moonmaass.weyl import EigenvalueList, averaged_s, main_term


def _extended_total(profile, T):
    """The main-term closed form without the T > 1 guard (for inversion)."""
    vol = profile.volume
    total = vol * T * T / (4 * math.pi)
    total += -2 * T * math.log(T) / math.pi
    total += T * (2 + math.log(math.pi / (2 * profile.N))) / math.pi
    w = main_term(profile, 10.0)
    total += w.elliptic_const + w.volume_const + w.spectral_const
    for p in profile.primes:
        x = T * math.log(p)
        k = math.floor(x / math.pi)
        a = x - k * math.pi
        total += a / (2 * math.pi)
        q = (math.sqrt(p) - 1) / (math.sqrt(p) + 1)
        q_eff = q if k % 2 == 0 else 1.0 / q
        total -= math.atan(q_eff * math.tan(a / 2)) / math.pi
    return total


@pytest.fixture(scope="module")
def ideal_list(p6):
    """Synthetic complete spectrum: r_n placed where the main term passes n - 1/2."""
    assert _extended_total(p6, 1.5) == pytest.approx(main_term(p6, 1.5).total, rel=1e-12)
    T_hi = 20.0
    count = math.floor(_extended_total(p6, T_hi) + 0.5)
    rs = []
    lo = 0.5
    for n in range(1, count + 1):
        f = lambda T: _extended_total(p6, T) - (n - 0.5)
        hi = max(lo + 0.5, 3.0)
        while f(hi) < 0:
            hi += 0.5
        r = brentq(f, lo, hi, xtol=1e-12)
        rs.append(r)
        lo = r
    assert all(b > a for a, b in zip(rs, rs[1:]))
    assert rs[-1] <= T_hi
    return EigenvalueList(N=6, rs=tuple(rs), eps=1e-8, r_lo=0.0, r_hi=T_hi)


def test_ideal_list_is_consistent(ideal_list, p6):
    rep = consecutiveness(ideal_list, p6)
    assert rep.verdict == "consistent"
    assert rep.window is None
    assert abs(rep.drift_at_end) < 0.15
    assert len(rep.T_grid) == 400
    assert rep.T_grid[0] == pytest.approx(5.0)
    assert rep.T_grid[-1] == pytest.approx(20.0)


def test_removal_trips_missing(ideal_list, p6):
    gapped = remove(ideal_list, 3)
    assert len(gapped) == len(ideal_list) - 1
    rep = consecutiveness(gapped, p6)
    assert rep.verdict == "missing_suspected"
    assert rep.window is not None
    assert rep.drift_at_end < -0.3


def test_injection_trips_surplus(ideal_list, p6):
    r_fake = 9.0
    padded = inject(ideal_list, r_fake ** 2 + 0.25)
    assert len(padded) == len(ideal_list) + 1
    rep = consecutiveness(padded, p6)
    assert rep.verdict == "surplus_suspected"
    assert rep.window is not None
    assert rep.drift_at_end > 0.3


def test_removal_shift_is_exact(ideal_list, p6):
    T = 18.0
    base = averaged_s(ideal_list, p6, T)
    for idx in (1, 7, 40):
        r0 = ideal_list.rs[idx - 1]
        assert r0 < T
        shifted = averaged_s(remove(ideal_list, idx), p6, T)
        assert shifted - base == pytest.approx(-(1.0 - r0 / T), abs=1e-12)
    # Dropping an eigenvalue above T leaves the average below T untouched.
    r_last = ideal_list.rs[-1]
    assert r_last > T
    shifted = averaged_s(remove(ideal_list, len(ideal_list)), p6, T)
    assert shifted == base


def test_injection_validation(ideal_list):
    with pytest.raises(RangeError):
        inject(ideal_list, 0.2)             # below the continuous spectrum
    with pytest.raises(RangeError):
        inject(ideal_list, 21.0 ** 2 + 0.25)  # outside the scanned window
    with pytest.raises(RangeError):
        remove(ideal_list, 0)
    with pytest.raises(RangeError):
        remove(ideal_list, len(ideal_list) + 1)


def test_short_range_rejected(p6):
    stub = EigenvalueList(N=6, rs=(2.0,), eps=1e-8, r_lo=0.0, r_hi=4.0)
    with pytest.raises(RangeError):
        consecutiveness(stub, p6)
