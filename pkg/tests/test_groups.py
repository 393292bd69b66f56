import math

import numpy as np
import pytest

from moonmaass.errors import DomainError, IterationLimit, MembershipViolation, UnsupportedGroup
from moonmaass.groups import (
    GroupElement,
    UpperHalfPoint,
    builtin_profile,
    estimate_floor,
    hyperbolic_distance,
    load_profile,
    make_element,
    prime_factors,
    pullback,
    pullback_points,
    save_profile,
)


def test_prime_factors():
    assert prime_factors(1) == ()
    assert prime_factors(5) == (5,)
    assert prime_factors(6) == (2, 3)
    assert prime_factors(30) == (2, 3, 5)
    assert prime_factors(210) == (2, 3, 5, 7)
    with pytest.raises(DomainError):
        prime_factors(4)
    with pytest.raises(DomainError):
        prime_factors(12)
    with pytest.raises(DomainError):
        prime_factors(0)


def test_make_element_accepts_valid_tuples():
    assert make_element(1, 1, 0, 1, 1, 1).as_tuple() == (1, 1, 0, 1, 1)
    # Fricke-type element at level 5: det = 5*0 - (-1)*5 = 5 = e.
    g = make_element(5, -1, 5, 0, 5, 5)
    assert g.as_tuple() == (5, -1, 5, 0, 5)
    # Scaled element with e = 2 strictly between 1 and N.
    h = make_element(2, 1, 6, 4, 2, 6)
    assert h.e == 2


def test_make_element_rejections():
    with pytest.raises(MembershipViolation):
        make_element(1, 1, 0, 1, 2, 6)  # determinant != e
    with pytest.raises(MembershipViolation):
        make_element(1, 0, 0, 1, 0, 6)  # e < 1
    with pytest.raises(MembershipViolation):
        make_element(5, 0, 0, 5, 5, 6)  # e does not divide N
    with pytest.raises(MembershipViolation):
        make_element(1, 0, 0, 2, 2, 6)  # e does not divide a
    with pytest.raises(MembershipViolation):
        make_element(2, 0, 0, 1, 2, 6)  # e does not divide d
    with pytest.raises(MembershipViolation):
        make_element(1, 0, 1, 1, 1, 6)  # N does not divide c
    with pytest.raises(DomainError):
        make_element(1, 0, 0, 1, 1, 4)  # level not square-free


def test_sign_canonicalization():
    assert make_element(-1, 0, 0, -1, 1, 1).as_tuple() == (1, 0, 0, 1, 1)
    assert make_element(0, 1, -1, 0, 1, 1).as_tuple() == (0, -1, 1, 0, 1)


def test_identity_and_inverse():
    e = GroupElement.identity(6)
    assert e.as_tuple() == (1, 0, 0, 1, 1)
    g = make_element(5, -1, 5, 0, 5, 5)
    assert (g * g.inverse()).as_tuple() == (1, 0, 0, 1, 1)
    assert (g.inverse() * g).as_tuple() == (1, 0, 0, 1, 1)


def test_known_mobius_actions():
    s = make_element(0, -1, 1, 0, 1, 1)
    assert s.apply_complex(1j) == pytest.approx(1j)
    assert s.apply_complex(2j) == pytest.approx(0.5j)
    g = make_element(5, -1, 5, 0, 5, 5)
    assert g.apply_complex(1j) == pytest.approx(1.0 + 0.2j)
    t = make_element(1, 1, 0, 1, 1, 6)
    assert t.apply_complex(0.25 + 1j) == pytest.approx(1.25 + 1j)


def test_level_mismatch_product():
    g = GroupElement.identity(5)
    h = GroupElement.identity(6)
    with pytest.raises(MembershipViolation):
        g * h


def test_random_products_stay_in_group(p6):
    rng = np.random.default_rng(7)
    moves = p6.moves()
    for _ in range(200):
        i, j, k = rng.integers(0, len(moves), size=3)
        w = moves[i] * moves[j] * moves[k]
        # make_element inside __mul__ re-validates membership; also check
        # the action matches the composed actions.
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 2.0))
        direct = moves[i].apply_complex(moves[j].apply_complex(moves[k].apply_complex(z)))
        assert w.apply_complex(z) == pytest.approx(direct, rel=1e-12)


def test_upper_half_point_validation():
    p = UpperHalfPoint(0.3, 1.5)
    assert p.z == 0.3 + 1.5j
    with pytest.raises(DomainError):
        UpperHalfPoint(0.0, 0.0)
    with pytest.raises(DomainError):
        UpperHalfPoint(0.0, -1.0)


def test_hyperbolic_distance():
    i = UpperHalfPoint(0.0, 1.0)
    assert hyperbolic_distance(i, i) == 0.0
    assert hyperbolic_distance(i, UpperHalfPoint(0.0, math.e)) == pytest.approx(1.0, rel=1e-14)
    # Symmetry.
    a = UpperHalfPoint(0.2, 0.7)
    b = UpperHalfPoint(-0.4, 1.9)
    assert hyperbolic_distance(a, b) == pytest.approx(hyperbolic_distance(b, a), rel=1e-14)


def test_builtin_profiles(p1, p5, p6):
    assert p1.volume == pytest.approx(math.pi / 3.0, rel=1e-15)
    assert p5.volume == pytest.approx(math.pi, rel=1e-15)
    assert p6.volume == pytest.approx(math.pi, rel=1e-15)
    assert p1.elliptic_orders == (2, 3)
    assert p5.elliptic_orders == (2, 2, 2)
    assert p6.elliptic_orders == (2, 2, 2)
    for p in (p1, p5, p6):
        assert p.num_cusps == 1
        assert p.n_small == 1
        assert p.m_quarter == 0
    assert p5.primes == (5,)
    assert p6.primes == (2, 3)


def test_builtin_floors(p1, p5, p6):
    # Stored floors carry a 0.99 safety factor below the exact vertex heights.
    assert p1.y_min == pytest.approx(0.99 * math.sqrt(3.0) / 2.0, rel=1e-6)
    assert p5.y_min == pytest.approx(0.99 * 0.2, rel=1e-6)
    assert p6.y_min == pytest.approx(0.99 * 1.0 / (3.0 * math.sqrt(2.0)), rel=1e-6)


def test_unsupported_level():
    with pytest.raises(UnsupportedGroup):
        builtin_profile(7)


def test_pullback_fixes_interior_points(p6):
    z = p6.center
    w, gamma = pullback(z, p6)
    assert gamma.as_tuple() == (1, 0, 0, 1, 1)
    assert w.x == z.x and w.y == z.y
    # Pulling back an already-reduced point changes nothing.
    deep = pullback(UpperHalfPoint(0.37, 0.011), p6)[0]
    again, gamma = pullback(deep, p6)
    assert gamma.as_tuple() == (1, 0, 0, 1, 1)
    assert again.x == deep.x and again.y == deep.y


def test_pullback_element_tracks_point(p1, p5, p6):
    rng = np.random.default_rng(11)
    for prof in (p1, p5, p6):
        for _ in range(40):
            z = UpperHalfPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.01, 3.0))
            w, gamma = pullback(z, prof)
            assert w.y >= prof.y_min
            img = gamma.apply_complex(z.z)
            assert img == pytest.approx(w.z, abs=1e-12)


def test_pullback_orbit_invariance(p1, p5, p6):
    # Two points on the same orbit must reduce to the same domain point.
    rng = np.random.default_rng(23)
    for prof in (p1, p5, p6):
        moves = prof.moves()
        checked = 0
        while checked < 120:
            z = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.05, 2.0))
            w = z
            for _ in range(rng.integers(1, 9)):
                w = moves[rng.integers(0, len(moves))].apply_complex(w)
            if w.imag < 1e-3:
                continue  # buried image: float64 has lost the orbit already
            a, _ = pullback(UpperHalfPoint(z.real, z.imag), prof)
            b, _ = pullback(UpperHalfPoint(w.real, w.imag), prof)
            assert abs(a.z - b.z) < 1e-10
            checked += 1


def test_pullback_points_matches_scalar(p5):
    rng = np.random.default_rng(3)
    xs = rng.uniform(-0.5, 0.5, size=64)
    y = 0.03
    xs_star, ys_star = pullback_points(xs, y, p5)
    assert np.all(ys_star >= p5.y_min)
    for k in range(0, 64, 7):
        w, _ = pullback(UpperHalfPoint(float(xs[k]), y), p5)
        assert xs_star[k] == pytest.approx(w.x, abs=1e-12)
        assert ys_star[k] == pytest.approx(w.y, abs=1e-12)
    with pytest.raises(DomainError):
        pullback_points(xs, -0.1, p5)


def test_pullback_iteration_limit(p6):
    with pytest.raises(IterationLimit):
        pullback(UpperHalfPoint(0.3, 1e-4), p6, max_iter=2)
    with pytest.raises(IterationLimit):
        pullback_points(np.array([0.3]), 1e-4, p6, max_iter=2)


def test_estimate_floor_agrees_with_stored(p5):
    assert estimate_floor(p5) == pytest.approx(p5.y_min, rel=1e-9)
    with pytest.raises(DomainError):
        estimate_floor(p5, samples=10)


def test_profile_round_trip(tmp_path, p6):
    path = tmp_path / "profile.json"
    save_profile(p6, path)
    back = load_profile(path)
    assert back.N == p6.N
    assert back.generators == p6.generators
    assert back.to_json() == p6.to_json()
