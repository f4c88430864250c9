"""Distances between laws on the real line.

* ``kolmogorov_phi``: weighted Kolmogorov distance
  ``sup_y |F_mu(y) - F_nu(y)| * phi(y)`` for a u-shaped weight ``phi``
  (continuous, >= 1, nonincreasing left of zero, nondecreasing right of it).
  With ``phi = 1`` this is the classical Kolmogorov distance.
* ``levy``: the Lévy metric, resolved by bisection on the two-sided sandwich
  ``F_mu(x - eps) - eps <= F_nu(x) <= F_mu(x + eps) + eps``.
* ``vague_distance`` / ``psi_vague`` / ``psi_levy``: a vague-convergence
  metric built from a fixed countable family of compactly supported test
  functions, plus the absolute gap of psi-moments.

Supremum evaluation: when both laws are purely atomic the weighted gap is
piecewise constant between atoms and the u-shape makes the weight maximal at
interval endpoints, so evaluating at every atom and its left limit is exact.
Continuous laws go through a breakpoint-plus-quantile grid refined locally
until the improvement drops below 1e-10.

Values of the vague metric depend on the chosen test family, so every result
table records the family descriptor; the default family is fixed and
bit-reproducible (``tri-plateau-v1``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .distributions import Distribution, FiniteDiscrete
from .errors import NotIntegrableError, ParameterError

__all__ = [
    "GaugeFunction",
    "parse_gauge",
    "DenseFamily",
    "kolmogorov_phi",
    "levy",
    "vague_distance",
    "psi_vague",
    "psi_levy",
    "uniform_phi_integrability",
]

_DIVERGENCE_CAP = 1e12
_REFINE_TOL = 1e-10


# ---------------------------------------------------------------------------
# gauges
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaugeFunction:
    """A weight function over the real line.

    ``kind`` is "u-shaped" (values >= 1, monotone on each side of zero; the
    weight of the Kolmogorov phi-metric) or "psi" (continuous, nonnegative,
    >= 1 outside the compact set [-compact_radius, compact_radius]; the gauge
    of the psi-weak metrics). Built-in descriptors: ``one``, ``power:p`` for
    (1 + |y|)^p, ``abs``, ``square``.
    """

    descriptor: str
    kind: str
    fn: Callable[[np.ndarray], np.ndarray]
    compact_radius: float = 1.0

    def __call__(self, y):
        return self.fn(np.asarray(y, dtype=float))[()]

    @property
    def is_u_shaped(self) -> bool:
        return self.kind == "u-shaped"

    # -- closed-form structure used by metrics and brackets ------------------

    def _power(self) -> float | None:
        if self.descriptor == "one":
            return 0.0
        if self.descriptor.startswith("power:"):
            return float(self.descriptor.split(":", 1)[1])
        return None

    def abs_superlevel_radius(self, K: float) -> float | None:
        """r with {gauge >= K} = {|y| >= r}; 0.0 when the whole line
        qualifies, None when the set is empty."""
        p = self._power()
        if p is not None:
            if K <= 1.0:
                return 0.0
            if p == 0.0:
                return None
            return K ** (1.0 / p) - 1.0
        if self.descriptor == "abs":
            return max(K, 0.0)
        if self.descriptor == "square":
            return math.sqrt(max(K, 0.0))
        # generic: doubling + bisection on the nondecreasing right branch
        if self(0.0) >= K:
            return 0.0
        hi = 1.0
        while self(hi) < K and self(-hi) < K:
            hi *= 2.0
            if hi > 1e300:
                return None
        lo = 0.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if max(float(self(mid)), float(self(-mid))) >= K:
                hi = mid
            else:
                lo = mid
        return hi

    def neg_half_inverse(self, z: float) -> float:
        """sup{y <= 0 : gauge(y) > z}, with sup{} = -inf; the right-continuous
        inverse of the nonincreasing branch, used by the bracket builder."""
        p = self._power()
        if p is not None:
            if z < 1.0:
                return 0.0
            if p == 0.0:
                return -math.inf  # gauge constant one, never exceeds z >= 1
            return min(0.0, 1.0 - z ** (1.0 / p))
        if float(self(0.0)) > z:
            return 0.0
        lo = -1.0
        while float(self(lo)) <= z:
            lo *= 2.0
            if lo < -1e300:
                return -math.inf
        hi = 0.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if float(self(mid)) > z:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    # -- moments --------------------------------------------------------

    def moment(self, dist: Distribution) -> float:
        """Integral of the gauge against the law, in closed form where the
        descriptor allows it."""
        if self.descriptor == "one":
            return 1.0
        if self.descriptor == "abs":
            return dist.abs_moment()
        if self.descriptor == "square":
            return dist.second_moment()
        p = self._power()
        if p == 1.0:
            return 1.0 + dist.abs_moment()
        if p == 2.0:
            return 1.0 + 2.0 * dist.abs_moment() + dist.second_moment()
        return dist.integral(lambda y: self(y), breakpoints=[0.0])

    def tail_moment(self, dist: Distribution, K: float, strict: bool = False,
                    side: str = "both") -> float:
        """Integral of gauge * 1{gauge >= K} (or > K when strict) against the
        law, optionally restricted to the nonpositive half line."""
        if dist.is_discrete():
            total = 0.0
            for x, w in dist.atoms():
                if side == "neg" and x > 0.0:
                    continue
                g = float(self(x))
                if (g > K) if strict else (g >= K):
                    total += w * g
            return total
        r = self.abs_superlevel_radius(K)
        if r is None:
            return 0.0
        lo, hi = dist.support()
        total = 0.0
        if r == 0.0:
            if side == "neg":
                return _moment_over(dist, self, max(lo, -math.inf), 0.0)
            return self.moment(dist)
        total += _moment_over(dist, self, lo, min(-r, hi))
        if side != "neg":
            total += _moment_over(dist, self, max(r, lo), hi)
        return total


def _moment_over(dist: Distribution, gauge: GaugeFunction, a: float, b: float) -> float:
    if not b > a:
        return 0.0
    fn = lambda y: gauge(y) * np.where((y >= a) & (y <= b), 1.0, 0.0)
    return dist.integral(fn, breakpoints=[a, b, 0.0])


def parse_gauge(descriptor: str) -> GaugeFunction:
    """Gauge from its config name: "one", "power:p", "abs", "square"."""
    if descriptor == "one":
        return GaugeFunction("one", "u-shaped", lambda y: np.ones_like(y), 0.0)
    if descriptor.startswith("power:"):
        p = float(descriptor.split(":", 1)[1])
        if p < 0:
            raise ParameterError(f"power gauge needs exponent >= 0, got {p}")
        return GaugeFunction(descriptor, "u-shaped", lambda y: (1.0 + np.abs(y)) ** p, 0.0)
    if descriptor == "abs":
        return GaugeFunction("abs", "psi", lambda y: np.abs(y), 1.0)
    if descriptor == "square":
        return GaugeFunction("square", "psi", lambda y: y * y, 1.0)
    raise ParameterError(f"unknown gauge descriptor {descriptor!r}")


# ---------------------------------------------------------------------------
# dense family for the vague metric
# ---------------------------------------------------------------------------


def _triangle(c: float, w: float):
    fn = lambda y: np.maximum(0.0, 1.0 - np.abs(np.asarray(y, dtype=float) - c) / w)
    return fn, (c - w, c + w), (c - w, c, c + w)


def _plateau(n: int):
    def fn(y):
        y = np.abs(np.asarray(y, dtype=float))
        return np.clip(n + 1.0 - y, 0.0, 1.0)

    return fn, (-(n + 1.0), n + 1.0), (-(n + 1.0), -float(n), float(n), n + 1.0)


def _center(i: int) -> float:
    # 0, 1/2, -1/2, 1, -1, 3/2, ...
    if i == 0:
        return 0.0
    m = (i + 1) // 2
    return 0.5 * m if i % 2 == 1 else -0.5 * m


_N_WIDTHS = 9  # widths 2^-2 .. 2^6


def _triangle_params(t: int) -> tuple[float, float]:
    # diagonal enumeration of (center rank, width rank) with width rank <= 8
    s = 0
    seen = 0
    while True:
        for i in range(s + 1):
            j = s - i
            if j >= _N_WIDTHS:
                continue
            if seen == t:
                return _center(i), 2.0 ** (j - 2)
            seen += 1
        s += 1


class DenseFamily:
    """Fixed countable family of compactly supported test functions: triangle
    bumps on the half-integer grid at dyadic widths interleaved with plateau
    trapezoids that are 1 on [-n, n] and vanish outside [-n-1, n+1].

    Truncating the vague-metric series at k_max changes the value by at most
    2^-k_max. All functions take values in [0, 1].
    """

    version = "tri-plateau-v1"

    def __init__(self, k_max: int = 40):
        if k_max < 1:
            raise ParameterError("k_max must be >= 1")
        self.k_max = int(k_max)
        self._items = []
        for k in range(1, self.k_max + 1):
            if k % 2 == 1:
                c, w = _triangle_params((k - 1) // 2)
                self._items.append(_triangle(c, w))
            else:
                self._items.append(_plateau(k // 2))

    @property
    def descriptor(self) -> str:
        return f"{self.version}:kmax={self.k_max}"

    def __len__(self) -> int:
        return self.k_max

    def function(self, k: int):
        """(callable, support interval, kink points) of the k-th member, 1-based."""
        if not 1 <= k <= self.k_max:
            raise ParameterError(f"family index {k} outside 1..{self.k_max}")
        return self._items[k - 1]

    def truncation_error_bound(self) -> float:
        return 2.0 ** (-self.k_max)


_DEFAULT_FAMILY = DenseFamily(40)


# ---------------------------------------------------------------------------
# weighted Kolmogorov supremum
# ---------------------------------------------------------------------------


def _gap_at(mu: Distribution, nu: Distribution, ys: np.ndarray, phi: GaugeFunction):
    right = np.abs(np.asarray(mu.cdf(ys)) - np.asarray(nu.cdf(ys))) * phi.fn(ys)
    left = np.abs(np.asarray(mu.cdf_left(ys)) - np.asarray(nu.cdf_left(ys))) * phi.fn(ys)
    return np.maximum(right, left)


def _atom_locations(dist: Distribution) -> np.ndarray:
    return np.array([x for x, _ in dist.atoms()])


def weighted_gap_sup(mu: Distribution, nu: Distribution, phi: GaugeFunction,
                     y_max: float | None = None) -> float:
    """sup over y (optionally restricted to y <= y_max) of
    |F_mu(y) - F_nu(y)| * phi(y)."""
    mu_disc, nu_disc = mu.is_discrete(), nu.is_discrete()
    both_atomic = mu_disc and nu_disc
    one_atomic = mu_disc != nu_disc
    cand = [_atom_locations(mu), _atom_locations(nu)]
    exact = both_atomic or (one_atomic and phi.descriptor == "one")
    if not exact:
        cand.append(mu.quantile_grid(257))
        cand.append(nu.quantile_grid(257))
        cand.append(np.array([0.0]))
    ys = np.concatenate([np.asarray(c, dtype=float) for c in cand])
    ys = ys[np.isfinite(ys)]
    if y_max is not None:
        ys = np.concatenate([ys[ys <= y_max], [y_max]])
    ys = np.unique(ys)
    if ys.size == 0:
        return 0.0
    vals = _gap_at(mu, nu, ys, phi)
    best = float(vals.max())
    if exact:
        return best
    # local refinement between grid neighbours of the current maximiser
    for _ in range(80):
        i = int(np.argmax(vals))
        lo = ys[i - 1] if i > 0 else ys[i] - 1.0
        hi = ys[i + 1] if i + 1 < ys.size else ys[i] + 1.0
        fresh = np.linspace(lo, hi, 9)
        if y_max is not None:
            fresh = fresh[fresh <= y_max]
        ys = np.unique(np.concatenate([ys, fresh]))
        vals = _gap_at(mu, nu, ys, phi)
        new_best = float(vals.max())
        if new_best - best < _REFINE_TOL:
            best = new_best
            break
        best = new_best
    # divergence scan along the tails for unbounded gauges; the upper tail
    # uses survival functions (CDF differences underflow at one, hiding
    # heavy tails from float arithmetic)
    if y_max is None and phi.descriptor != "one":
        for sign in (-1.0, 1.0):
            edge = ys[0] if sign < 0 else ys[-1]
            quiet = 0
            for j in range(240):
                y = edge + sign * 2.0**j
                if sign > 0:
                    gap = abs(float(mu.survival(y)) - float(nu.survival(y)))
                else:
                    gap = abs(float(mu.cdf(y)) - float(nu.cdf(y)))
                v = gap * float(phi(y))
                if v > best:
                    best = v
                    quiet = 0
                else:
                    quiet += 1
                if best > _DIVERGENCE_CAP:
                    raise NotIntegrableError(
                        "weighted CDF gap grows without bound along the tail grid; "
                        "a law lies outside the finite-gauge-moment class"
                    )
                if quiet >= 8:
                    break
    return best


def kolmogorov_phi(mu: Distribution, nu: Distribution, phi: GaugeFunction) -> float:
    """Weighted Kolmogorov distance sup_y |F_mu(y) - F_nu(y)| * phi(y).

    Exact at atoms and their left limits when both laws are atomic; grid
    refinement otherwise. Raises NotIntegrableError when the supremum
    diverges along the tails (law outside the metric's domain).
    """
    if not phi.is_u_shaped:
        raise ParameterError(f"kolmogorov_phi needs a u-shaped gauge, got {phi.descriptor!r}")
    return weighted_gap_sup(mu, nu, phi)


# ---------------------------------------------------------------------------
# Lévy metric
# ---------------------------------------------------------------------------


def _finite_hull(dist: Distribution) -> tuple[float, float]:
    lo, hi = dist.support()
    if not math.isfinite(lo):
        lo = dist.quantile(1e-12)
    if not math.isfinite(hi):
        q = dist.quantile(1.0 - 1e-12)
        hi = q if math.isfinite(q) else dist.quantile(1.0 - 1e-9)
    return lo, hi


def _one_sided_violation(f: Distribution, g: Distribution, eps: float,
                         f_grid: np.ndarray, g_grid: np.ndarray) -> float:
    """sup_x [F_f(x) - F_g(x + eps)].

    Exact via jump-point candidates unless both laws are continuous: between
    jumps of F_f the difference falls (F_g nondecreasing), and between jumps
    of F_g(.+eps) it rises, so the supremum sits at an f-jump (right value)
    or just left of a g-jump shifted by eps. Continuous pairs get grid plus
    local refinement.
    """
    worst = -1.0
    if f.is_discrete() or not g.is_discrete():
        pts = f_grid
        worst = max(worst, float(np.max(np.asarray(f.cdf(pts)) - np.asarray(g.cdf(pts + eps)))))
    if g.is_discrete() or not f.is_discrete():
        pts = g_grid - eps
        worst = max(worst, float(np.max(np.asarray(f.cdf_left(pts)) - np.asarray(g.cdf_left(pts + eps)))))
    if not f.is_discrete() and not g.is_discrete():
        xs = np.unique(np.concatenate([f_grid, g_grid - eps]))
        diff = np.asarray(f.cdf(xs)) - np.asarray(g.cdf(xs + eps))
        best_i = int(np.argmax(diff))
        lo = xs[max(best_i - 1, 0)]
        hi = xs[min(best_i + 1, xs.size - 1)]
        for _ in range(40):
            fresh = np.linspace(lo, hi, 17)
            vals = np.asarray(f.cdf(fresh)) - np.asarray(g.cdf(fresh + eps))
            j = int(np.argmax(vals))
            worst = max(worst, float(vals[j]))
            new_lo = fresh[max(j - 1, 0)]
            new_hi = fresh[min(j + 1, fresh.size - 1)]
            if hi - lo <= 1e-13 * max(1.0, abs(lo), abs(hi)):
                break
            lo, hi = new_lo, new_hi
        worst = max(worst, float(np.max(diff)))
    return worst


def _levy_points(dist: Distribution) -> np.ndarray:
    pts = _atom_locations(dist)
    if not dist.is_discrete():
        lo, hi = _finite_hull(dist)
        pts = np.concatenate([pts, dist.quantile_grid(256), [lo, hi]])
    return np.unique(pts[np.isfinite(pts)])


def levy(mu: Distribution, nu: Distribution) -> float:
    """Lévy distance, by bisection on the sandwich condition.

    Both sandwich sides are checked at the jump points of both CDFs and
    their eps-shifts (exact unless both laws are continuous, in which case a
    quantile grid with local refinement is used). Bracket
    [0, 1 + support diameter], 60 iterations, midpoint of the final bracket.
    """
    mu_pts, nu_pts = _levy_points(mu), _levy_points(nu)
    lo_m, hi_m = _finite_hull(mu)
    lo_n, hi_n = _finite_hull(nu)
    hi = 1.0 + max(0.0, max(hi_m, hi_n) - min(lo_m, lo_n))
    lo = 0.0

    def violation(eps: float) -> float:
        return max(
            _one_sided_violation(nu, mu, eps, nu_pts, mu_pts),
            _one_sided_violation(mu, nu, eps, mu_pts, nu_pts),
        )

    if violation(0.0) <= 0.0:
        return 0.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if violation(mid) <= mid:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# vague and psi-weak metrics
# ---------------------------------------------------------------------------


def vague_distance(mu: Distribution, nu: Distribution,
                   family: DenseFamily | None = None) -> float:
    """Sum over the family of 2^-k * min(1, |int f_k dmu - int f_k dnu|),
    truncated at the family's k_max (truncation error at most 2^-k_max)."""
    fam = family or _DEFAULT_FAMILY
    total = 0.0
    for k in range(1, fam.k_max + 1):
        fn, supp, kinks = fam.function(k)
        lo, hi = supp
        gap = abs(_integrate_member(mu, fn, lo, hi, kinks) - _integrate_member(nu, fn, lo, hi, kinks))
        total += 2.0 ** (-k) * min(1.0, gap)
    return total


def _integrate_member(dist: Distribution, fn, lo: float, hi: float, kinks) -> float:
    s_lo, s_hi = dist.support()
    if s_hi < lo or s_lo > hi:
        return 0.0
    return dist.integral(fn, breakpoints=list(kinks))


def _psi_gap(mu: Distribution, nu: Distribution, psi: GaugeFunction) -> float:
    gm = psi.moment(mu)
    gn = psi.moment(nu)
    if not (math.isfinite(gm) and math.isfinite(gn)):
        raise NotIntegrableError("infinite psi-moment: law outside the psi-weak domain")
    return abs(gm - gn)


def psi_vague(mu: Distribution, nu: Distribution, psi: GaugeFunction,
              family: DenseFamily | None = None) -> float:
    """Vague distance plus the absolute psi-moment gap."""
    return vague_distance(mu, nu, family) + _psi_gap(mu, nu, psi)


def psi_levy(mu: Distribution, nu: Distribution, psi: GaugeFunction) -> float:
    """Lévy distance plus the absolute psi-moment gap."""
    return levy(mu, nu) + _psi_gap(mu, nu, psi)


# ---------------------------------------------------------------------------
# uniform gauge integrability (condition (b) diagnostics)
# ---------------------------------------------------------------------------


@dataclass
class TailMomentTable:
    """Tail gauge moments per truncation level: rows are K values, columns
    marginals; ``sup`` is the supremum across marginals at each K."""

    K_grid: list[float]
    per_marginal: np.ndarray  # shape (len(K_grid), n_marginals)
    sup: np.ndarray = field(init=False)

    def __post_init__(self):
        self.sup = self.per_marginal.max(axis=1)

    def infinite_flags(self) -> np.ndarray:
        return ~np.isfinite(self.per_marginal).all(axis=0)


def uniform_phi_integrability(marginals: Sequence[Distribution], gauge: GaugeFunction,
                              K_grid: Sequence[float]) -> TailMomentTable:
    """Sup over the marginals of the gauge tail moment, per truncation level
    K; the caller inspects the decay in K. Infinite moments are flagged."""
    K_grid = [float(K) for K in K_grid]
    table = np.empty((len(K_grid), len(marginals)))
    for j, dist in enumerate(marginals):
        full = gauge.moment(dist)
        for i, K in enumerate(K_grid):
            table[i, j] = math.inf if not math.isfinite(full) else gauge.tail_moment(dist, K)
    return TailMomentTable(K_grid, table)
