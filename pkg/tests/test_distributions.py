import math

import numpy as np
import pytest

from qrobust import (
    DomainError,
    EmpiricalMeasure,
    FiniteDiscrete,
    FoldedDistribution,
    Gaussian,
    PointMass,
    Uniform,
    absolute_law,
    distribution_from_config,
    left_inverse,
    quantile_transform,
    right_inverse,
)
from conftest import random_finite_discrete

ALL_KINDS = [
    PointMass(0.7),
    Uniform(-1.0, 2.0),
    Gaussian(0.3, 1.4),
    FiniteDiscrete([-2.0, 0.0, 1.5], [0.2, 0.5, 0.3]),
    EmpiricalMeasure([3.0, -1.0, 3.0, 0.5]),
]


@pytest.mark.parametrize("dist", ALL_KINDS, ids=lambda d: d.kind)
def test_cdf_axioms_on_grid(dist, rng):
    pts = np.sort(np.concatenate([
        rng.uniform(-8, 8, 200),
        [x for x, _ in dist.atoms()],
    ]))
    vals = np.asarray(dist.cdf(pts), dtype=float)
    assert np.all(np.diff(vals) >= -1e-15)
    assert np.all((0.0 <= vals) & (vals <= 1.0))
    assert dist.cdf(-1e12) == pytest.approx(0.0, abs=1e-12)
    assert dist.cdf(1e12) == pytest.approx(1.0, abs=1e-12)
    # right continuity at the atoms
    for x, w in dist.atoms():
        assert dist.cdf(x) == pytest.approx(dist.cdf_left(x) + w, abs=1e-12)


def test_finite_discrete_weight_invariants():
    with pytest.raises(Exception):
        FiniteDiscrete([0.0, 1.0], [0.6, 0.5])
    with pytest.raises(Exception):
        FiniteDiscrete([0.0, 1.0], [1.2, -0.2])


def test_empirical_equals_uniform_finite_discrete(rng):
    sample = rng.normal(size=25)
    emp = EmpiricalMeasure(sample)
    fd = FiniteDiscrete(sample, np.full(25, 1 / 25))
    pts = np.concatenate([sample, rng.uniform(-4, 4, 100)])
    assert np.allclose(emp.cdf(pts), fd.cdf(pts), atol=1e-12)
    assert emp.n == 25
    # CDF equals k/n at the k-th order statistic
    for k in (1, 7, 25):
        assert emp.cdf(emp.order_statistic(k)) == pytest.approx(k / 25, abs=0)


# ---------------------------------------------------------------------------
# generalized inverses
# ---------------------------------------------------------------------------


def test_left_inverse_examples():
    assert left_inverse(Uniform(0, 1), 0.3) == pytest.approx(0.3, abs=1e-12)
    # oracle: enumerate the three CDF steps of the equal-weight law on {1,2,3}
    fd = FiniteDiscrete([1, 2, 3], [1 / 3, 1 / 3, 1 / 3])
    steps = [(1.0, 1 / 3), (2.0, 2 / 3), (3.0, 1.0)]
    expected = min(y for y, level in steps if level >= 0.5)
    assert expected == 2.0
    assert left_inverse(fd, 0.5) == expected
    # empty set convention: a function bounded below 0.95 never reaches it
    bounded = lambda y: 0.9 * (y > 0)
    assert left_inverse(bounded, 0.95, bracket=(-10, 10)) == math.inf


def test_right_inverse_examples():
    # oracle: grid bisection for H(y) = max(1 - y, 0) at t = 0.4
    H = lambda y: max(1.0 - y, 0.0)
    grid = np.linspace(0, 2, 2_000_001)
    expected = grid[np.asarray([H(y) > 0.4 for y in grid])].max()
    assert expected == pytest.approx(0.6, abs=2e-6)  # oracle resolution: grid spacing 1e-6
    assert right_inverse(H, 0.4) == pytest.approx(0.6, abs=1e-9)
    # empty set convention
    assert right_inverse(lambda y: 0.0, 0.2) == 0.0
    # survival function of |xi| for xi a point mass at 2: H(y) = 1 for y < 2
    abs_law = absolute_law(PointMass(2.0))
    assert right_inverse(abs_law, 0.5) == 2.0


@pytest.mark.parametrize("dist", ALL_KINDS, ids=lambda d: d.kind)
def test_galois_inequalities(dist, rng):
    # F_inv(F(y)) <= y and F(F_inv(s)) >= s
    for y in rng.uniform(-6, 6, 80):
        q = dist.quantile(float(dist.cdf(y)))
        assert q <= y + 1e-9 or q == -math.inf
    for s in rng.uniform(0.001, 0.999, 80):
        q = dist.quantile(float(s))
        if math.isfinite(q):
            assert dist.cdf(q) >= s - 1e-12


def test_left_inverse_empirical_order_statistics(rng):
    emp = EmpiricalMeasure(rng.normal(size=17))
    for k in range(1, 18):
        assert left_inverse(emp, k / 17) == emp.order_statistic(k)


# ---------------------------------------------------------------------------
# quantile transformation
# ---------------------------------------------------------------------------


def test_quantile_transform_uniform_identity():
    out = quantile_transform([0.2, 0.7], Uniform(0, 1), seed=5)
    assert np.allclose(out, [0.2, 0.7], atol=1e-12)


def test_quantile_transform_point_mass():
    pm = PointMass(0.0)
    out = quantile_transform([0.0, 0.0, 0.0], pm, seed=9)
    assert np.all((0.0 < out) & (out <= 1.0))
    for u in out:
        assert left_inverse(pm, float(u)) == 0.0


def test_quantile_transform_gaussian_postcondition(rng):
    marginal = Gaussian(0, 1)
    sample = marginal.sample(rng, 50)
    us = quantile_transform(sample, marginal, seed=123)
    emp_x = EmpiricalMeasure(sample)
    emp_u = EmpiricalMeasure(us)
    # F_hat = G_hat o F on a 1000-point grid (direct evaluation oracle)
    grid = np.linspace(-5, 5, 1000)
    assert np.allclose(emp_x.cdf(grid), emp_u.cdf(marginal.cdf(grid)), atol=1e-12)
    # and the left inverse recovers every sample point
    for u, x in zip(us, sample):
        assert marginal.quantile(float(u)) == pytest.approx(x, abs=1e-9)


def test_quantile_transform_atomic_coupling(rng):
    marginal = random_finite_discrete(rng, max_atoms=5)
    sample = marginal.sample(rng, 60)
    us = quantile_transform(sample, marginal, seed=77)
    emp_x = EmpiricalMeasure(sample)
    emp_u = EmpiricalMeasure(us)
    grid = np.concatenate([marginal.locations, rng.uniform(-4, 4, 500)])
    assert np.allclose(emp_x.cdf(grid), emp_u.cdf(marginal.cdf(grid)), atol=1e-12)


def test_quantile_transform_determinism(rng):
    sample = rng.normal(size=30)
    a = quantile_transform(sample, Gaussian(0, 1), seed=42)
    b = quantile_transform(sample, Gaussian(0, 1), seed=42)
    assert np.array_equal(a, b)


def test_quantile_transform_zero_mass_error():
    with pytest.raises(DomainError, match="index 1"):
        quantile_transform([0.5, 7.0], Uniform(0, 1), seed=1)
    with pytest.raises(DomainError):
        quantile_transform([0.25], PointMass(0.0), seed=1)


# ---------------------------------------------------------------------------
# folded laws and config round-trip
# ---------------------------------------------------------------------------


def test_absolute_law_closed_forms(rng):
    assert absolute_law(PointMass(-3.0)).location == 3.0
    u = absolute_law(Uniform(-2.0, -1.0))
    assert (u.lo, u.hi) == (1.0, 2.0)
    fd = absolute_law(FiniteDiscrete([-1.0, 1.0, 2.0], [0.25, 0.25, 0.5]))
    assert fd.atoms() == [(1.0, 0.5), (2.0, 0.5)]


def test_folded_gaussian_matches_sampling(rng):
    base = Gaussian(0.0, 1.3)
    folded = FoldedDistribution(base)
    draws = np.abs(base.sample(rng, 200_000))
    for y in (0.3, 1.0, 2.5):
        assert folded.cdf(y) == pytest.approx(float(np.mean(draws <= y)), abs=5e-3)
    assert folded.mean() == pytest.approx(draws.mean(), abs=5e-3)
    # survival quantile: closed form against empirical quantiles
    for t in (0.1, 0.5, 0.9):
        assert folded.upper_quantile(t) == pytest.approx(
            float(np.quantile(draws, 1 - t)), abs=2e-2
        )


@pytest.mark.parametrize("dist", ALL_KINDS, ids=lambda d: d.kind)
def test_config_round_trip(dist, rng):
    clone = distribution_from_config(dist.to_config())
    pts = rng.uniform(-6, 6, 50)
    assert np.allclose(dist.cdf(pts), clone.cdf(pts), atol=0)


@pytest.mark.parametrize("dist", ALL_KINDS, ids=lambda d: d.kind)
def test_moments_match_quadrature_or_sums(dist):
    got = (dist.mean(), dist.second_moment(), dist.abs_moment())
    want = (
        dist.integral(lambda y: y, breakpoints=[0.0]),
        dist.integral(lambda y: y * y, breakpoints=[0.0]),
        dist.integral(lambda y: abs(y), breakpoints=[0.0]),
    )
    assert got == pytest.approx(want, abs=1e-9)
