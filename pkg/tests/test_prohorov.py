import numpy as np
import pytest

from qrobust import (
    FiniteLaw,
    FiniteMetricSpace,
    InvariantError,
    ParameterError,
    prohorov_distance,
    strassen_feasible,
)
from qrobust.prohorov import _dinic_flow, _interval_greedy
from conftest import random_finite_law, strassen_subset_oracle


def test_law_invariants():
    with pytest.raises(InvariantError):
        FiniteLaw([0.0, 1.0], [0.7, 0.7])
    with pytest.raises(InvariantError):
        FiniteLaw([0.0, 1.0], [1.3, -0.3])
    with pytest.raises(InvariantError):
        FiniteMetricSpace([[0.0, 1.0], [2.0, 0.0]])  # asymmetric
    with pytest.raises(InvariantError):
        FiniteMetricSpace([[0.0, 5.0, 1.0], [5.0, 0.0, 1.0], [1.0, 1.0, 0.0]])  # triangle


def test_strassen_examples():
    d0 = FiniteLaw([0.0], [1.0])
    d1 = FiniteLaw([1.0], [1.0])
    half = FiniteLaw([0.0, 1.0], [0.5, 0.5])
    # identity: diagonal coupling
    c = strassen_feasible(d0, d0, 0.0, 0.0)
    c.validate()
    assert c.mass_within(0.0) == pytest.approx(1.0, abs=1e-12)
    # infeasible: A = {0} gives 1 <= 0 + 0.3 false (subset brute force)
    assert not strassen_subset_oracle(d0, d1, 0.5, 0.3)
    assert strassen_feasible(d0, d1, 0.5, 0.3) is None
    # feasible via the overflow arc (brute force over all 4 subsets)
    assert strassen_subset_oracle(half, d0, 0.2, 0.5)
    c = strassen_feasible(half, d0, 0.2, 0.5)
    c.validate()
    assert c.mass_within(0.2) >= 0.5 - 1e-12


def test_strassen_parameter_errors():
    law = FiniteLaw([0.0], [1.0])
    with pytest.raises(ParameterError):
        strassen_feasible(law, law, -0.1, 0.0)


def test_prohorov_examples():
    d0 = FiniteLaw([0.0], [1.0])
    d1 = FiniteLaw([1.0], [1.0])
    half = FiniteLaw([0.0, 1.0], [0.5, 0.5])
    assert prohorov_distance(d0, d0) == 0.0
    # subset brute-force oracle over a bisected eps grid
    def oracle_distance(a, b, hi=2.5, iters=40):
        lo = 0.0
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            if strassen_subset_oracle(a, b, mid, mid):
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    assert oracle_distance(d0, d1) == pytest.approx(1.0, abs=1e-9)
    assert prohorov_distance(d0, d1) == pytest.approx(1.0, abs=1e-9)
    assert oracle_distance(half, d0) == pytest.approx(0.5, abs=1e-9)
    assert prohorov_distance(half, d0) == pytest.approx(0.5, abs=1e-9)


def test_flow_engines_agree(rng):
    # the interval greedy (real line) against the generic Dinic max-flow
    for _ in range(60):
        mu = random_finite_law(rng, max_atoms=7)
        nu = random_finite_law(rng, max_atoms=7)
        delta = float(rng.uniform(0, 3))
        _, shipped_greedy = _interval_greedy(
            mu.points, mu.int_weights, nu.points, nu.int_weights, delta
        )
        _, shipped_dinic = _dinic_flow(
            mu.cross_distances(nu), mu.int_weights, nu.int_weights, delta
        )
        assert shipped_greedy == shipped_dinic


def test_flow_vs_subset_oracle(rng):
    for _ in range(30):
        mu = random_finite_law(rng, max_atoms=6)
        nu = random_finite_law(rng, max_atoms=6)
        for _ in range(6):
            delta = float(rng.uniform(0, 2.5))
            eps = float(rng.uniform(0, 0.6))
            want = strassen_subset_oracle(mu, nu, delta, eps)
            got = strassen_feasible(mu, nu, delta, eps) is not None
            assert got == want


def test_abstract_space_flow(rng):
    # four points with a valid non-euclidean metric
    d = np.array([
        [0.0, 1.0, 2.0, 2.0],
        [1.0, 0.0, 1.5, 1.5],
        [2.0, 1.5, 0.0, 1.0],
        [2.0, 1.5, 1.0, 0.0],
    ])
    space = FiniteMetricSpace(d)
    mu = FiniteLaw([0, 1], [0.5, 0.5], space=space)
    nu = FiniteLaw([2, 3], [0.25, 0.75], space=space)
    for delta in (0.5, 1.0, 1.5, 2.0):
        for eps in (0.0, 0.3, 0.8):
            want = strassen_subset_oracle(mu, nu, delta, eps)
            got = strassen_feasible(mu, nu, delta, eps) is not None
            assert got == want
    val = prohorov_distance(mu, nu)
    assert strassen_subset_oracle(mu, nu, val + 1e-9, val + 1e-9)
    assert not strassen_subset_oracle(mu, nu, val - 1e-6, val - 1e-6)


def test_coupling_invariants_and_concentration(rng):
    for _ in range(25):
        mu = random_finite_law(rng, max_atoms=8)
        nu = random_finite_law(rng, max_atoms=8)
        delta = float(rng.uniform(0, 2))
        eps = float(rng.uniform(0, 1))
        coupling = strassen_feasible(mu, nu, delta, eps)
        if coupling is None:
            continue
        coupling.validate(tol=1e-10)
        assert coupling.mass_within(delta) >= 1.0 - eps - 1e-9


def test_feasibility_monotone(rng):
    for _ in range(15):
        mu = random_finite_law(rng, max_atoms=5)
        nu = random_finite_law(rng, max_atoms=5)
        deltas = np.sort(rng.uniform(0, 2.5, 4))
        epss = np.sort(rng.uniform(0, 0.8, 4))
        grid = [[strassen_feasible(mu, nu, d, e) is not None for e in epss] for d in deltas]
        for i in range(len(deltas)):
            for j in range(len(epss)):
                if grid[i][j]:
                    assert all(grid[i2][j] for i2 in range(i, len(deltas)))
                    assert all(grid[i][j2] for j2 in range(j, len(epss)))


def test_prohorov_metric_axioms(rng):
    for _ in range(20):
        laws = [random_finite_law(rng, max_atoms=5) for _ in range(3)]
        d01 = prohorov_distance(laws[0], laws[1])
        d10 = prohorov_distance(laws[1], laws[0])
        d12 = prohorov_distance(laws[1], laws[2])
        d02 = prohorov_distance(laws[0], laws[2])
        assert d01 >= 0.0
        assert prohorov_distance(laws[0], laws[0]) == 0.0
        assert d01 == pytest.approx(d10, abs=1e-8)
        assert d02 <= d01 + d12 + 1e-8


def test_from_sample_and_merging():
    law = FiniteLaw.from_sample([1.0, 1.0, 2.0, 3.0])
    assert np.allclose(law.points, [1.0, 2.0, 3.0])
    assert np.allclose(law.weights, [0.5, 0.25, 0.25])
    assert int(law.int_weights.sum()) == 10**12
