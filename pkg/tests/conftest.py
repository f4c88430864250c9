"""Shared helpers: random law generators and independent brute-force oracles.

The oracles here deliberately avoid the library's computational paths: the
feasibility oracle enumerates subsets, the supremum oracles walk dense
grids, and the distance oracles scan epsilon grids. They exist to pin down
expected values that the package must reproduce.
"""

import numpy as np
import pytest

from qrobust import EmpiricalMeasure, FiniteDiscrete, FiniteLaw
from qrobust.prohorov import SCALE


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_finite_discrete(rng, max_atoms=6, span=3.0) -> FiniteDiscrete:
    k = int(rng.integers(1, max_atoms + 1))
    locs = rng.uniform(-span, span, k)
    w = rng.dirichlet(np.ones(k))
    return FiniteDiscrete(locs, w)


def random_empirical(rng, n=40, span=3.0) -> EmpiricalMeasure:
    return EmpiricalMeasure(rng.uniform(-span, span, n))


def random_finite_law(rng, max_atoms=6, span=3.0) -> FiniteLaw:
    k = int(rng.integers(1, max_atoms + 1))
    locs = rng.uniform(-span, span, k)
    w = rng.dirichlet(np.ones(k))
    return FiniteLaw(locs, w)


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------


def grid_sup_weighted_gap(mu, nu, phi_fn, lo=-12.0, hi=12.0, m=200_001) -> float:
    """Dense-grid supremum of |F_mu - F_nu| * phi, evaluated at grid points
    and just left of them."""
    ys = np.linspace(lo, hi, m)
    gap_r = np.abs(np.asarray(mu.cdf(ys)) - np.asarray(nu.cdf(ys))) * phi_fn(ys)
    gap_l = np.abs(np.asarray(mu.cdf_left(ys)) - np.asarray(nu.cdf_left(ys))) * phi_fn(ys)
    return float(max(gap_r.max(), gap_l.max()))


def levy_sandwich_holds(mu, nu, eps, xs) -> bool:
    """Literal two-sided sandwich check on a dense x grid (with left limits)."""
    for f, g in ((mu, nu), (nu, mu)):
        # sup_x F_f(x) - F_g(x + eps) <= eps, checked from both evaluation sides
        hi = np.maximum(
            np.asarray(f.cdf(xs)) - np.asarray(g.cdf(xs + eps)),
            np.asarray(f.cdf_left(xs)) - np.asarray(g.cdf_left(xs + eps)),
        )
        if float(hi.max()) > eps + 1e-12:
            return False
    return True


def levy_grid_oracle(mu, nu, xs, eps_grid) -> float:
    """Smallest eps on the grid for which the sandwich holds."""
    for eps in eps_grid:
        if levy_sandwich_holds(mu, nu, eps, xs):
            return float(eps)
    return float(eps_grid[-1])


def strassen_subset_oracle(mu1: FiniteLaw, mu2: FiniteLaw, delta: float, eps: float) -> bool:
    """Brute-force check of mu1[A] <= mu2[A^delta] + eps over every subset A
    of the first support, in the same exact integer mass arithmetic the flow
    engine uses (the algorithms stay independent; only the number
    representation is shared so threshold cases agree exactly)."""
    d = mu1.cross_distances(mu2)
    w1 = mu1.int_weights
    w2 = mu2.int_weights
    eps_scaled = min(SCALE, round(eps * SCALE))
    m = len(w1)
    close = d <= delta
    for mask in range(1, 1 << m):
        idx = [i for i in range(m) if (mask >> i) & 1]
        mass1 = int(w1[idx].sum())
        hull = close[idx].any(axis=0)
        mass2 = int(w2[hull].sum())
        if mass1 > mass2 + eps_scaled:
            return False
    return True


def two_sample_ks_oracle(xs, ys) -> float:
    """Classical two-sample KS statistic by direct order-statistic
    comparison over the pooled points."""
    xs = np.sort(np.asarray(xs, float))
    ys = np.sort(np.asarray(ys, float))
    pooled = np.concatenate([xs, ys])
    fx = np.searchsorted(xs, pooled, side="right") / xs.size
    fy = np.searchsorted(ys, pooled, side="right") / ys.size
    return float(np.abs(fx - fy).max())


@pytest.fixture
def rng():
    return make_rng(20260809)
