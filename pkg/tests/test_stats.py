import math

import numpy as np
import pytest
from scipy.integrate import quad

from moonmaass.errors import (DomainError, EmptyInput, InsufficientData,
                              MonotonicityViolation)
from moonmaass.stats import (
    independence_demo,
    joint_histogram,
    ks_distance,
    reference_cdf,
    reference_pdf,
    spacing_histogram,
    spacings,
    unfold,
)
from moonmaass.weyl import EigenvalueList, main_term


def test_reference_densities_normalized():
    for kind in ("poisson", "goe"):
        mass, _ = quad(lambda s: reference_pdf(kind, s), 0.0, 40.0)
        mean, _ = quad(lambda s: s * reference_pdf(kind, s), 0.0, 40.0)
        assert mass == pytest.approx(1.0, abs=1e-10), kind
        assert mean == pytest.approx(1.0, abs=1e-10), kind
        assert reference_cdf(kind, 0.0) == 0.0
        assert reference_cdf(kind, 30.0) == pytest.approx(1.0, abs=1e-12)
        # CDF really is the integral of the PDF.
        for s in (0.3, 1.0, 2.5):
            part, _ = quad(lambda t: reference_pdf(kind, t), 0.0, s)
            assert reference_cdf(kind, s) == pytest.approx(part, abs=1e-10)


def test_reference_density_validation():
    with pytest.raises(DomainError):
        reference_pdf("poisson", -0.1)
    with pytest.raises(DomainError):
        reference_pdf("gue", 1.0)
    with pytest.raises(DomainError):
        reference_cdf("wigner", 1.0)


def test_spacings():
    assert np.allclose(spacings([1.0, 2.5, 2.7]), [1.5, 0.2])
    with pytest.raises(EmptyInput):
        spacings([4.2])


def _goe_sample(rng, n):
    u = rng.uniform(0.0, 1.0, size=n)
    return np.sqrt(-4.0 * np.log1p(-u) / math.pi)


def test_ks_distance_discriminates():
    rng = np.random.default_rng(31)
    exp_sample = rng.exponential(1.0, size=2000)
    assert ks_distance(exp_sample, "poisson") < 0.05
    assert ks_distance(exp_sample, "goe") > 0.10
    goe_sample = _goe_sample(rng, 2000)
    assert ks_distance(goe_sample, "goe") < 0.05
    assert ks_distance(goe_sample, "poisson") > 0.10
    # Order-independent.
    shuffled = exp_sample.copy()
    rng.shuffle(shuffled)
    assert ks_distance(shuffled, "poisson") == ks_distance(exp_sample, "poisson")
    with pytest.raises(EmptyInput):
        ks_distance(np.array([]), "poisson")


def test_spacing_histogram():
    rng = np.random.default_rng(37)
    s = rng.exponential(1.0, size=400)
    h = spacing_histogram(s)
    width = h.edges[1] - h.edges[0]
    assert sum(h.counts) == 400
    assert sum(h.density) * width == pytest.approx(1.0, rel=1e-12)
    assert all(c >= 0 for c in h.counts)
    with pytest.raises(InsufficientData):
        spacing_histogram(s[:30])
    with pytest.raises(InsufficientData):
        spacing_histogram(s[:50], bins=20)


def test_joint_histogram_factorizes_for_independent_spacings():
    rng = np.random.default_rng(41)
    s = rng.exponential(1.0, size=4000)
    h = joint_histogram(s, bins=3)
    width = h.edges[1] - h.edges[0]
    dens = np.array(h.density)
    assert dens.sum() * width * width == pytest.approx(1.0, rel=1e-12)
    # Cell probabilities factorize into marginals for independent spacings.
    prob = dens * width * width
    assert np.max(np.abs(prob - np.outer(prob.sum(axis=1), prob.sum(axis=0)))) < 0.02
    with pytest.raises(InsufficientData):
        joint_histogram(s[:30], bins=5)


def test_unfold(p6):
    lst = EigenvalueList(N=6, rs=(3.0, 5.0, 10.0, 15.0), eps=1e-8,
                         r_lo=0.0, r_hi=16.0)
    u = unfold(lst, p6)
    assert u.u == tuple(main_term(p6, r).total for r in lst.rs)
    assert all(b > a for a, b in zip(u.u, u.u[1:]))
    assert u.source["group"] == 6 and u.source["count"] == 4
    assert np.allclose(spacings(u), np.diff(u.u))


def test_unfold_rejects_nonmonotone_stretch(p1):
    # The level-1 smooth term genuinely decreases slightly around T ~ 5;
    # levels placed there unfold out of order and must be flagged.
    assert main_term(p1, 5.2).total < main_term(p1, 5.0).total
    lst = EigenvalueList(N=1, rs=(5.0, 5.2), eps=1e-8, r_lo=4.0, r_hi=6.0)
    with pytest.raises(MonotonicityViolation):
        unfold(lst, p1)


def test_independence_demo_spacings_identical():
    rng = np.random.default_rng(43)
    x = 1.0 + np.cumsum(rng.exponential(1.0, size=80))
    m1 = lambda t: t + 0.5 * math.sin(t)
    m2 = lambda t: t * t / 10.0 + math.log1p(t)
    rep1 = independence_demo(x, m1)
    rep2 = independence_demo(x, m2)
    # Same spacings, bit for bit, despite different unfolding maps.
    assert rep1.spacings == rep2.spacings
    assert rep1.spacings == tuple(np.diff(x))
    assert rep1.lambdas != rep2.lambdas
    assert rep1.max_unfold_defect <= 1e-9
    assert rep2.max_spacing_defect <= 1e-9


def test_independence_demo_validation():
    with pytest.raises(MonotonicityViolation):
        independence_demo(np.array([1.0, 1.0, 2.0]), lambda t: t)
    with pytest.raises(MonotonicityViolation):
        independence_demo(np.array([1.0, 2.0]), lambda t: -t)
    with pytest.raises(MonotonicityViolation):
        independence_demo(np.array([1.0, 2.0]), lambda t: t + 50.0)
