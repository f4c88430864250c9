"""Quantitative bounds and proof constructions made executable.

Three pieces:

* ``rio_bound``: the maximal-inequality bound for identically distributed,
  strongly mixing, square-integrable summands,

      P[ max_{k<=n} |sum_{i<=k} (xi_i - E xi_1)| >= 2x ]
          <= (16 / x^2) n sum_{j=0}^{n-1} int_0^{2 alpha(j)} Gbar_inv(t)^2 dt,

  where Gbar_inv is the right-continuous inverse of the survival function of
  |xi_1| and alpha(0) = 1/4 by convention. Treated as an axiom and validated
  empirically by the lab, never re-derived.

* ``lln_tail_bound``: the truncation decomposition behind the uniform weak
  law of large numbers: with truncation level K,

      S1 <= (1152 K^2 / delta^2) (1/n) sum_{j<n} alpha(j)
      S2 <= (3 / delta) E[|xi_1| 1{|xi_1| >= K}]
      S3  = 0 if E[|xi_1| 1{|xi_1| > K}] < delta/3, else 1,

  and the reported bound is min(1, S1 + S2 + S3).

* ``build_brackets``: the finite family of integrable function brackets that
  covers the weighted-indicator class

      w_s(.) = w(s) 1_{[0,s]}(.),   w(t) = phi(F_inv(t)) 1_{[0, F(0)]}(t)

  on the unit interval, where F is the marginal CDF and phi a u-shaped
  weight. The grids are constructed greedily left to right (the smallest
  next point exhausting the eps/2 budget), which is deterministic; a
  conservative refinement pass re-splits any bracket whose integral exceeds
  eps (refining the partition never breaks the covering property). Only the
  negative half line is constructed; the positive half follows by reflecting
  the marginal.

All probability bounds are capped at one before reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .distributions import Distribution, absolute_law
from .errors import DomainError, NotIntegrableError, ParameterError
from .metrics import GaugeFunction
from .processes import ALPHA_CAP, MixingProfile

__all__ = [
    "rio_bound",
    "lln_tail_bound",
    "abs_tail_moment",
    "BracketFamily",
    "build_brackets",
]

_QUAD_KW = dict(epsabs=1e-12, epsrel=1e-12, limit=200)


# ---------------------------------------------------------------------------
# mixing-coefficient inputs
# ---------------------------------------------------------------------------


def _alpha_values(alpha, n: int) -> np.ndarray:
    """alpha(0..n-1) from a MixingProfile, a callable, or an explicit list
    (taken verbatim, capped at the universal 1/4)."""
    if isinstance(alpha, MixingProfile):
        vals = alpha.values(n)
    elif callable(alpha):
        vals = np.array([float(alpha(j)) for j in range(n)])
    else:
        vals = np.asarray(alpha, dtype=float).ravel()
        if vals.size < n:
            raise ParameterError(f"alpha list has {vals.size} entries, need {n}")
        vals = vals[:n]
    return np.clip(vals, 0.0, ALPHA_CAP)


# ---------------------------------------------------------------------------
# Rio-type maximal inequality bound
# ---------------------------------------------------------------------------


def _survival_quantile_square_integral(abs_marginal: Distribution, u: float) -> float:
    """int_0^u q(t)^2 dt for q the right-continuous inverse of the survival
    function of the (nonnegative) law; exact for atomic laws."""
    if u <= 0.0:
        return 0.0
    u = min(u, 1.0)
    if abs_marginal.is_discrete():
        # q(t) equals the k-th largest atom on [S(z_k), S(z_k-)), S the
        # survival function, so the largest values occupy t near 0
        atoms = sorted(abs_marginal.atoms(), key=lambda zw: -zw[0])
        z = np.array([a for a, _ in atoms])
        w = np.array([b for _, b in atoms])
        hi = np.cumsum(w)
        lo = hi - w
        overlap = np.clip(np.minimum(hi, u) - lo, 0.0, None)
        return float((z * z) @ overlap)
    val, _ = quad(lambda t: abs_marginal.upper_quantile(t) ** 2, 0.0, u, **_QUAD_KW)
    return val


def rio_bound(abs_marginal: Distribution, alpha, n: int, x: float) -> float:
    """Upper bound (capped at 1) on the probability that the running maximum
    of centred partial sums up to n reaches 2x.

    ``abs_marginal`` is the law of |xi_1| (see ``distributions.absolute_law``),
    ``alpha`` a MixingProfile, callable, or per-lag list. Using an upper
    bound for alpha is sound: the integrand's range only grows with alpha.
    Monotone nonincreasing in x.
    """
    if x <= 0.0:
        raise DomainError("rio_bound needs x > 0")
    second = abs_marginal.second_moment()
    if not math.isfinite(second):
        raise DomainError("rio_bound needs a square-integrable summand")
    alphas = _alpha_values(alpha, n)
    total = 0.0
    cache: dict[float, float] = {}
    for a in alphas:
        u = 2.0 * float(a)
        if u not in cache:
            cache[u] = _survival_quantile_square_integral(abs_marginal, u)
        total += cache[u]
    return min(1.0, 16.0 / (x * x) * n * total)


# ---------------------------------------------------------------------------
# uniform weak LLN tail bound
# ---------------------------------------------------------------------------


def abs_tail_moment(marginal: Distribution, K: float, strict: bool = False,
                    gauge: GaugeFunction | None = None) -> float:
    """E[|xi| 1{|xi| >= K}] (or with strict inequality) where xi follows the
    given law, or xi = gauge(X) with X following it when a gauge is passed
    (gauges are nonnegative, so |xi| = xi)."""
    if gauge is not None:
        return gauge.tail_moment(marginal, K, strict=strict)
    if marginal.is_discrete():
        total = 0.0
        for y, w in marginal.atoms():
            z = abs(y)
            if (z > K) if strict else (z >= K):
                total += w * z
        return total
    fn = lambda y: np.where(np.abs(y) >= K, np.abs(y), 0.0)
    return marginal.integral(fn, breakpoints=[-K, K])


def lln_tail_bound(marginal: Distribution, alpha, n: int, delta: float, K: float,
                   gauge: GaugeFunction | None = None) -> float:
    """Truncation-decomposition bound (capped at 1) on
    P[|n^-1 sum xi_i - E xi_1| >= delta] for identically distributed,
    strongly mixing xi, with truncation level K.

    ``marginal`` is the law of xi itself; alternatively pass the law of X
    plus a ``gauge`` and the summands are read as xi = gauge(X) (same mixing
    coefficients)."""
    if delta <= 0.0 or K <= 0.0:
        raise DomainError("lln_tail_bound needs delta > 0 and K > 0")
    alphas = _alpha_values(alpha, n)
    s1 = 1152.0 * K * K / (delta * delta) * float(alphas.mean())
    s2 = 3.0 / delta * abs_tail_moment(marginal, K, strict=False, gauge=gauge)
    s3 = 0.0 if abs_tail_moment(marginal, K, strict=True, gauge=gauge) < delta / 3.0 else 1.0
    return min(1.0, s1 + s2 + s3)


# ---------------------------------------------------------------------------
# weight functions on the unit interval
# ---------------------------------------------------------------------------


class _DiscreteWeight:
    """w for an atomic marginal: a nonincreasing step function of t with
    exact piecewise-linear running integral."""

    def __init__(self, marginal: Distribution, phi: GaugeFunction):
        cum = 0.0
        levels = [0.0]
        values = []
        for y, wgt in marginal.atoms():
            if y > 0.0:
                break
            cum += wgt
            levels.append(cum)
            values.append(float(phi(y)))
        self.F0 = cum
        self.levels = np.array(levels)  # 0 = c_0 < c_1 < ... < c_K = F(0)
        self.values = np.array(values)  # w on (c_{k-1}, c_k]
        self._h_at = np.concatenate(([0.0], np.cumsum(self.values * np.diff(self.levels))))

    def w(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.levels, t, side="left")  # t in (c_{idx-1}, c_idx]
        vals = np.concatenate((self.values, [0.0, 0.0]))
        out = np.where((t > self.F0) | (t <= 0.0), 0.0, vals[np.minimum(idx, len(vals)) - 1])
        return np.where(t == 0.0, math.inf, out)[()]

    def w_right(self, t: float) -> float:
        """Right limit w(t+); differs from w(t) exactly at the step levels."""
        idx = int(np.searchsorted(self.levels, t, side="right"))  # t in [c_{idx-1}, c_idx)
        if t >= self.F0 or idx > len(self.values):
            return 0.0
        return float(self.values[idx - 1])

    def h(self, t: float) -> float:
        t = min(max(t, 0.0), 1.0)
        idx = int(np.searchsorted(self.levels, t, side="left"))
        if idx == 0:
            return 0.0
        if idx > len(self.values):
            return float(self._h_at[-1])
        return float(self._h_at[idx - 1] + self.values[idx - 1] * (t - self.levels[idx - 1]))

    def h_inverse(self, target: float) -> float:
        if target >= self._h_at[-1]:
            return 1.0
        idx = int(np.searchsorted(self._h_at, target, side="right"))
        # target inside the linear piece over (levels[idx-1], levels[idx]]
        return float(self.levels[idx - 1] + (target - self._h_at[idx - 1]) / self.values[idx - 1])

    def integral_interval(self, a: float, b: float) -> float:
        return self.h(b) - self.h(a)

    def w_right_inverse(self, u: float) -> float:
        """sup{s : w(s) > u}, with sup{} = 0."""
        above = self.values > u
        if not np.any(above):
            return 0.0
        return float(self.levels[np.nonzero(above)[0][-1] + 1])

    def w_right_inverse_integral(self, a: float, b: float) -> float:
        """int_a^b w_inv(u) du, exact: w_inv is a step function with steps at
        the weight values."""
        if not b > a:
            return 0.0
        # breakpoints: weight values (descending); w_inv constant between them
        pts = [a, b] + [float(v) for v in self.values if a < v < b]
        pts = sorted(set(pts))
        total = 0.0
        for lo, hi in zip(pts[:-1], pts[1:]):
            total += self.w_right_inverse(0.5 * (lo + hi)) * (hi - lo)
        return total


class _ContinuousWeight:
    """w for a continuous marginal, evaluated through the marginal CDF and
    the gauge's closed forms; running integrals by adaptive quadrature."""

    def __init__(self, marginal: Distribution, phi: GaugeFunction):
        self.marginal = marginal
        self.phi = phi
        self.F0 = float(marginal.cdf(0.0))
        self._h_total = self._h_raw(self.F0)

    def w(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        out = np.empty(tt.shape)
        for i, s in enumerate(tt):
            if s <= 0.0:
                out[i] = math.inf
            elif s > self.F0:
                out[i] = 0.0
            else:
                out[i] = float(self.phi(self.marginal.quantile(float(s))))
        return out[0] if scalar else out

    def w_right(self, t: float) -> float:
        # continuous marginal kinds have continuous quantile functions on
        # (0, F0], so the right limit agrees with the value there
        if t >= self.F0:
            return 0.0
        return float(self.w(max(t, 1e-300)))

    def _h_raw(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        q = self.marginal.quantile(min(t, self.F0))
        if q == -math.inf:
            return 0.0
        fn = lambda y: np.where(y <= q, self.phi.fn(np.asarray(y, dtype=float)), 0.0)
        return self.marginal.integral(fn, breakpoints=[q, 0.0])

    def h(self, t: float) -> float:
        return self._h_raw(min(max(t, 0.0), 1.0))

    def h_inverse(self, target: float) -> float:
        if target >= self._h_total:
            return 1.0
        lo, hi = 0.0, self.F0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if self.h(mid) >= target:
                hi = mid
            else:
                lo = mid
        return hi

    def integral_interval(self, a: float, b: float) -> float:
        return self.h(b) - self.h(a)

    def w_right_inverse(self, u: float) -> float:
        y = self.phi.neg_half_inverse(u)
        if y == -math.inf:
            return 0.0
        return min(self.F0, float(self.marginal.cdf(y)))

    def w_right_inverse_integral(self, a: float, b: float) -> float:
        if not b > a:
            return 0.0
        val, _ = quad(lambda u: self.w_right_inverse(u), a, b, **_QUAD_KW)
        return val


def _weight_of(marginal: Distribution, phi: GaugeFunction):
    return _DiscreteWeight(marginal, phi) if marginal.is_discrete() else _ContinuousWeight(marginal, phi)


# ---------------------------------------------------------------------------
# bracket family
# ---------------------------------------------------------------------------


@dataclass
class BracketFamily:
    """Brackets [l_i, u_i] over the unit interval covering the weighted
    indicator class of the marginal:

        l_i = w(t_i) 1_[0, t_{i-1}],
        u_i = w(t_{i-1}) 1_[0, t_{i-1}] + w(.) 1_(t_{i-1}, t_i].

    ``s_grid`` partitions the running integral of w into eps/2 increments,
    ``y_grid`` partitions the value axis (last point infinite), and
    ``t_grid`` merges both. Each bracket integrates u - l to at most eps and
    every w_s lies inside the bracket indexed by ``covering_index(s)``.
    """

    marginal: Distribution
    gauge: GaugeFunction
    eps: float
    s_grid: np.ndarray
    y_grid: np.ndarray
    t_grid: np.ndarray
    _weight: object

    @property
    def bracket_count(self) -> int:
        return len(self.t_grid) - 1

    def w(self, t):
        return self._weight.w(t)

    def covering_index(self, s: float) -> int:
        """1-based index i with t_{i-1} < s <= t_i."""
        if not 0.0 < s <= 1.0:
            raise DomainError("covering_index needs s in (0, 1]")
        return int(np.searchsorted(self.t_grid, s, side="left"))

    def lower(self, i: int, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return np.where(pts <= self.t_grid[i - 1], float(self._weight.w(self.t_grid[i])), 0.0)

    def upper(self, i: int, pts) -> np.ndarray:
        """The head coefficient is the right limit w(t_{i-1}+): the class
        members covered by this bracket have s > t_{i-1}, so the right limit
        dominates them; the at-point value would inflate the bracket across
        jumps of w sitting exactly on the grid."""
        pts = np.asarray(pts, dtype=float)
        t_lo, t_hi = self.t_grid[i - 1], self.t_grid[i]
        head_val = self._weight.w_right(float(t_lo)) if t_lo > 0.0 else math.inf
        mid_mask = (pts > t_lo) & (pts <= t_hi)
        mid = np.zeros(pts.shape)
        if np.any(mid_mask):
            mid[mid_mask] = np.atleast_1d(self._weight.w(pts[mid_mask]))
        return np.where(pts <= t_lo, head_val, mid)

    def bracket_integral(self, i: int) -> float:
        """int (u_i - l_i) over the unit interval."""
        t_lo, t_hi = float(self.t_grid[i - 1]), float(self.t_grid[i])
        slab = 0.0
        if t_lo > 0.0:
            slab = (self._weight.w_right(t_lo) - float(self._weight.w(t_hi))) * t_lo
        return slab + self._weight.integral_interval(t_lo, t_hi)

    def max_bracket_integral(self) -> float:
        return max(self.bracket_integral(i) for i in range(1, self.bracket_count + 1))

    # -- empirical-process side ------------------------------------------

    def domination_bound(self, us: np.ndarray) -> float:
        """max_i max{ int u_i d(G_n - I), int l_i d(I - G_n) } + eps for the
        empirical CDF G_n of the (0,1]-valued points ``us``; by the covering
        property this dominates the weighted CDF gap on the negative half
        line, almost surely under the quantile coupling."""
        us = np.sort(np.asarray(us, dtype=float))
        n = us.size
        best = -math.inf
        for i in range(1, self.bracket_count + 1):
            t_lo, t_hi = float(self.t_grid[i - 1]), float(self.t_grid[i])
            w_lo = self._weight.w_right(t_lo) if t_lo > 0.0 else 0.0
            w_hi = float(self._weight.w(t_hi))
            g_lo = np.searchsorted(us, t_lo, side="right") / n
            # int u_i dG_n
            mask = (us > t_lo) & (us <= t_hi)
            mid_vals = np.atleast_1d(self._weight.w(us[mask])) if np.any(mask) else np.empty(0)
            upper_emp = w_lo * g_lo + (float(mid_vals.sum()) / n if mid_vals.size else 0.0)
            upper_int = w_lo * t_lo + self._weight.integral_interval(t_lo, t_hi)
            lower_emp = w_hi * g_lo
            lower_int = w_hi * t_lo
            best = max(best, upper_emp - upper_int, lower_int - lower_emp)
        return best + self.eps

    # -- invariants --------------------------------------------------------

    def validate(self, s_points: Sequence[float] | None = None,
                 eval_points: Sequence[float] | None = None,
                 tol: float = 1e-8) -> None:
        """Raise unless every bracket is an eps-bracket, every w_s on the
        validation grid is covered, and the bracket count stays within the
        s-grid plus y-grid budget."""
        if self.bracket_count > (len(self.s_grid) - 1) + (len(self.y_grid) - 1):
            raise DomainError("bracket count exceeds the grid budget")
        worst = self.max_bracket_integral()
        if worst > self.eps + tol:
            raise DomainError(f"bracket integral {worst} exceeds eps = {self.eps}")
        if s_points is None:
            s_points = np.linspace(0.01, 1.0, 100)
        if eval_points is None:
            base = np.unique(np.concatenate([self.t_grid, np.linspace(0.0, 1.0, 211)]))
            eval_points = np.unique(np.concatenate([base, (base[:-1] + base[1:]) / 2.0]))
        eval_points = np.asarray(eval_points, dtype=float)
        eval_points = eval_points[eval_points > 0.0]
        for s in s_points:
            i = self.covering_index(float(s))
            ws = float(self._weight.w(float(s)))
            vals = np.where(eval_points <= s, ws, 0.0)
            if np.any(self.lower(i, eval_points) > vals + tol):
                raise DomainError(f"lower bracket fails to stay below w_s at s = {s}")
            if np.any(self.upper(i, eval_points) < vals - tol):
                raise DomainError(f"upper bracket fails to stay above w_s at s = {s}")


def build_brackets(marginal: Distribution, phi: GaugeFunction, eps: float) -> BracketFamily:
    """Construct the eps-bracket family for the weighted indicator class of
    the marginal on the negative half line."""
    if eps <= 0.0:
        raise ParameterError("eps must be positive")
    if not phi.is_u_shaped:
        raise ParameterError("build_brackets needs a u-shaped gauge")
    if not math.isfinite(phi.moment(marginal)):
        raise NotIntegrableError("infinite gauge moment: marginal outside the metric domain")
    W = _weight_of(marginal, phi)
    half = eps / 2.0

    # s-grid: greedy eps/2 increments of the running integral h
    s_grid = [0.0]
    h_prev = 0.0
    h_total = W.h(1.0)
    while s_grid[-1] < 1.0:
        target = h_prev + half
        if target >= h_total - 1e-15:
            s_grid.append(1.0)
            break
        nxt = W.h_inverse(target)
        nxt = min(max(nxt, s_grid[-1]), 1.0)
        if nxt <= s_grid[-1]:
            nxt = 1.0
        s_grid.append(nxt)
        h_prev = W.h(nxt)
    s_grid = np.unique(np.asarray(s_grid))

    # truncation level: negative-side tail gauge moment below eps/2
    K = 1.0
    while phi.tail_moment(marginal, K, side="neg") > half and K < 2.0**200:
        K *= 2.0

    # y-grid: greedy eps/2 increments of the running integral of the right
    # inverse of w, up to K, then one unbounded cell
    y_grid = [0.0]
    while y_grid[-1] < K:
        lo = y_grid[-1]
        budget = W.w_right_inverse_integral(lo, K)
        if budget <= half + 1e-15:
            y_grid.append(K)
            break
        a, b = lo, K
        for _ in range(80):
            mid = 0.5 * (a + b)
            if W.w_right_inverse_integral(lo, mid) >= half:
                b = mid
            else:
                a = mid
        nxt = min(max(b, lo * (1 + 1e-12) + 1e-300), K)
        if nxt <= lo:
            nxt = K
        y_grid.append(nxt)
    y_grid = np.unique(np.asarray(y_grid + [math.inf]))

    # merged t-grid
    t_points = set(s_grid.tolist())
    for y in y_grid[:-1]:
        t_points.add(min(1.0, max(0.0, W.w_right_inverse(float(y)))))
    t_points.update((0.0, 1.0))
    t_grid = np.unique(np.asarray(sorted(t_points)))

    family = BracketFamily(marginal, phi, eps, s_grid, y_grid, t_grid, W)

    # conservative re-split: refining the partition never breaks covering
    for _ in range(60):
        bad = [
            i for i in range(1, family.bracket_count + 1)
            if family.bracket_integral(i) > eps + 1e-12
        ]
        if not bad:
            break
        extra = [(family.t_grid[i - 1] + family.t_grid[i]) / 2.0 for i in bad]
        t_grid = np.unique(np.concatenate([family.t_grid, extra]))
        family = BracketFamily(marginal, phi, eps, s_grid, y_grid, t_grid, W)
    return family
