import math

import numpy as np
import pytest
from scipy.integrate import quad

from moonmaass.errors import DomainError, RangeError
from moonmaass.weyl import (
    EigenvalueList,
    alpha,
    arctan_integral,
    averaged_envelope,
    averaged_s,
    averaged_s_grid,
    counting,
    g_envelope,
    load_list,
    main_term,
    main_term_integral,
    s_num,
    save_list,
    sawtooth_integral,
    sawtooth_integral_quadrature,
)


def _constant_term(profile):
    w = main_term(profile, 10.0)
    return w.elliptic_const + w.volume_const + w.spectral_const


def test_constant_terms(p1, p5, p6):
    assert _constant_term(p1) == pytest.approx(-131.0 / 144.0, abs=1e-12)
    assert _constant_term(p5) == pytest.approx(-43.0 / 48.0, abs=1e-12)
    assert _constant_term(p6) == pytest.approx(-43.0 / 48.0, abs=1e-12)


def test_terms_sum_to_total(p6):
    w = main_term(p6, 23.7)
    parts = (w.quadratic + w.tlogt + w.linear + w.elliptic_const
             + w.volume_const + w.spectral_const + w.sawtooth + w.arctan_term)
    assert w.total == pytest.approx(parts, rel=1e-15)
    assert w.g_bound > 0.0
    with pytest.raises(DomainError):
        main_term(p6, 1.0)


def test_smooth_difference_between_levels(p5, p6):
    # Same volume and signature, so after stripping the periodic terms the
    # two main terms differ by exactly (T/pi) log(6/5).
    for T in np.linspace(2.0, 60.0, 40):
        m5 = main_term(p5, T)
        m6 = main_term(p6, T)
        smooth5 = m5.total - m5.sawtooth - m5.arctan_term
        smooth6 = m6.total - m6.sawtooth - m6.arctan_term
        assert smooth5 - smooth6 == pytest.approx(
            T * math.log(6.0 / 5.0) / math.pi, abs=1e-10)


def test_alpha_sawtooth():
    rng = np.random.default_rng(2)
    for _ in range(50):
        T = rng.uniform(0.1, 80.0)
        a = alpha(6, 1, T)
        x = T * math.log(2.0)
        assert 0.0 <= a < math.pi
        assert a == pytest.approx(x - math.floor(x / math.pi) * math.pi, abs=1e-12)
    assert alpha(6, 2, 5.0) == pytest.approx(
        5 * math.log(3.0) - math.floor(5 * math.log(3.0) / math.pi) * math.pi)
    with pytest.raises(DomainError):
        alpha(6, 3, 5.0)
    with pytest.raises(DomainError):
        alpha(5, 1, 0.0)


def test_main_term_continuity_at_cell_boundary(p6):
    # The sawtooth drops by 1/2 and the arctan term rises by 1/2 at
    # T = k pi / log p; the total must not jump.
    T_star = 10.0 * math.pi / math.log(2.0)
    lo = main_term(p6, T_star - 1e-9)
    hi = main_term(p6, T_star + 1e-9)
    assert hi.sawtooth - lo.sawtooth == pytest.approx(-0.5, abs=1e-6)
    assert hi.arctan_term - lo.arctan_term == pytest.approx(0.5, abs=1e-6)
    assert hi.total - lo.total == pytest.approx(0.0, abs=1e-6)


def _cells(p, T):
    lp = math.log(p)
    return [k * math.pi / lp for k in range(1, int(T * lp / math.pi) + 1)]


def test_sawtooth_integral_routes():
    for p in (2, 3, 5):
        for T in (0.7, 4.0, 17.3, 52.9):
            closed = sawtooth_integral(p, T)
            assert sawtooth_integral_quadrature(p, T) == pytest.approx(closed, rel=1e-12)
            # Independent adaptive quadrature of the sawtooth itself.
            f = lambda t: alpha(p, 1, t)
            ref, _ = quad(f, 1e-12, T, points=_cells(p, T), limit=200)
            assert closed == pytest.approx(ref, rel=1e-9)


def _arctan_integrand(p):
    q = (math.sqrt(p) - 1.0) / (math.sqrt(p) + 1.0)

    def f(t):
        x = t * math.log(p)
        k = math.floor(x / math.pi)
        a = x - k * math.pi
        q_eff = q if k % 2 == 0 else 1.0 / q
        return math.atan(q_eff * math.tan(a / 2.0))

    return f


def test_arctan_integral_vs_quadrature():
    for p in (2, 3, 5):
        for T in (1.3, 6.8, 24.5):
            ref, err = quad(_arctan_integrand(p), 0.0, T, points=_cells(p, T), limit=400)
            assert arctan_integral(p, T) == pytest.approx(ref, abs=max(1e-9, 10 * err))


def test_main_term_integral_vs_quadrature(p6):
    T = 12.0
    pts = sorted(c for p in p6.primes for c in _cells(p, T) if c > 1.0)
    ref, err = quad(lambda t: main_term(p6, t).total, 1.0, T, points=pts, limit=400)
    got = main_term_integral(p6, T) - main_term_integral(p6, 1.0)
    assert got == pytest.approx(ref, abs=max(1e-8, 10 * err))


def _toy_list(rs, r_hi=12.0):
    return EigenvalueList(N=6, rs=tuple(rs), eps=1e-8, r_lo=0.0, r_hi=r_hi)


def test_counting_and_s_num(p6):
    lst = _toy_list((2.0, 3.0, 5.0, 7.0, 11.0))
    assert counting(lst, 1.5) == 0
    assert counting(lst, 3.0) == 2
    assert counting(lst, 11.5) == 5
    assert s_num(lst, p6, 6.0) == pytest.approx(3 - main_term(p6, 6.0).total, rel=1e-15)
    # Beyond the scanned window the count would be incomplete.
    with pytest.raises(RangeError):
        s_num(lst, p6, 12.5)
    with pytest.raises(RangeError):
        averaged_s(lst, p6, 12.5)


def test_averaged_s_removal_shift(p6):
    lst = _toy_list((2.0, 3.0, 5.0, 7.0, 11.0))
    gapped = _toy_list((2.0, 3.0, 7.0, 11.0))
    T = 12.0
    r0 = 5.0
    shift = averaged_s(gapped, p6, T) - averaged_s(lst, p6, T)
    assert shift == pytest.approx(-(1.0 - r0 / T), abs=1e-12)
    with pytest.raises(DomainError):
        averaged_s(lst, p6, 0.9)


def test_averaged_s_grid_matches_scalar(p6):
    lst = _toy_list((2.0, 3.0, 5.0, 7.0, 11.0))
    Ts = np.linspace(2.0, 12.0, 17)
    grid = averaged_s_grid(lst, p6, Ts)
    for T, v in zip(Ts, grid):
        assert v == pytest.approx(averaged_s(lst, p6, float(T)), rel=1e-13, abs=1e-13)


def test_envelope(p1, p6):
    assert g_envelope(p1, 10.0) == pytest.approx(0.0976525165027865, rel=1e-12)
    assert g_envelope(p1, 20.0) == pytest.approx(g_envelope(p1, 10.0) / 2.0, rel=1e-14)
    # The averaged envelope decays and dominates the raw envelope average.
    assert averaged_envelope(p6, 30.0) < averaged_envelope(p6, 10.0)
    assert averaged_envelope(p6, 1.0) == pytest.approx(g_envelope(p6, 1.0), rel=1e-14)


def test_eigenvalue_list_validation():
    with pytest.raises(DomainError):
        _toy_list((3.0, 2.0))          # unsorted
    with pytest.raises(DomainError):
        _toy_list((2.0, 2.0 + 1e-9))   # merge-tolerance collision
    with pytest.raises(DomainError):
        _toy_list((-1.0, 2.0))         # nonpositive r
    with pytest.raises(DomainError):
        _toy_list((2.0, 13.0))         # outside declared range
    with pytest.raises(DomainError):
        EigenvalueList(N=6, rs=(), eps=1e-8, r_lo=5.0, r_hi=5.0)
    lst = _toy_list((2.0, 3.0))
    assert lst.lambdas == (4.25, 9.25)
    assert lst.records == [(1, 2.0, 4.25), (2, 3.0, 9.25)]


def test_list_round_trip(tmp_path):
    rs = (2.1234567890123457, 3.0000000001, 7.77)
    lst = EigenvalueList(N=6, rs=rs, eps=1e-8, r_lo=0.0, r_hi=12.0,
                         config_hash="deadbeefdeadbeef")
    path = tmp_path / "list.csv"
    save_list(lst, path, sidecar={"rejected": 0})
    back = load_list(path)
    assert back.rs == lst.rs
    assert back.config_hash == lst.config_hash
    assert back.N == lst.N and back.eps == lst.eps
    # Corrupt the lambda column: loader cross-checks it against r.
    bad = path.read_text().replace("7.77,60.6229", "7.77,61.0")
    assert bad != path.read_text()
    path.write_text(bad)
    with pytest.raises(DomainError):
        load_list(path)
