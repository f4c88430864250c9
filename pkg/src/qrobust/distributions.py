"""Laws on the real line exposed through their CDFs.

Five concrete kinds (point mass, uniform, Gaussian, finite discrete,
empirical) plus a derived absolute-value view. Everything downstream --
metrics, couplings, mixing bounds, bracket constructions -- consumes laws
only through this interface:

* ``cdf`` / ``cdf_left``: right-continuous CDF and its left limits,
* ``quantile``: the left-continuous generalized inverse
  ``inf {y : F(y) >= t}`` with the empty-set convention ``inf {} = +inf``
  (and ``-inf`` for t <= 0, where every y qualifies),
* ``upper_quantile``: the right-continuous inverse of the survival function
  ``sup {y : 1 - F(y) > t}`` with ``sup {} = 0`` on the nonnegative axis,
* exact first/second/absolute moments and integration of test functions.

Gaussian CDF values come from ``scipy.special.ndtr`` (Cephes erf-based,
absolute error below 1e-15); no numeric integration is used for any
parametric CDF. All objects are immutable after construction and all
operations are pure, so concurrent use needs no coordination.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr, ndtri

from .errors import DomainError, InvariantError, ParameterError

__all__ = [
    "Distribution",
    "PointMass",
    "Uniform",
    "Gaussian",
    "FiniteDiscrete",
    "EmpiricalMeasure",
    "FoldedDistribution",
    "absolute_law",
    "left_inverse",
    "right_inverse",
    "quantile_transform",
    "distribution_from_config",
]

_WEIGHT_TOL = 1e-12
_QUAD_KW = dict(epsabs=1e-12, epsrel=1e-12, limit=200)


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


class Distribution:
    """Common interface; subclasses fill in the closed forms."""

    kind: str = "abstract"

    # -- CDF surface ---------------------------------------------------

    def cdf(self, y):
        raise NotImplementedError

    def cdf_left(self, y):
        """Left limit F(y-)."""
        raise NotImplementedError

    def quantile(self, t: float) -> float:
        """Left-continuous inverse inf{y : F(y) >= t}; -inf for t <= 0,
        +inf when no y qualifies."""
        raise NotImplementedError

    def survival(self, y):
        return 1.0 - self.cdf(y)

    def upper_quantile(self, t: float) -> float:
        """sup{y : 1 - F(y) > t} with sup{} = -inf replaced by the support
        infimum clamp; callers on the nonnegative axis get the sup{} = 0
        convention via max(..., 0)."""
        if t >= 1.0:
            return -math.inf
        if t < 0.0:
            return math.inf
        lo, hi = self.support()
        if self.survival(max(lo, -1e300)) <= t:
            return lo if math.isfinite(lo) else -math.inf
        # bracket [a, b] with survival(a) > t >= survival(b)
        a = lo if math.isfinite(lo) else -1.0
        b = hi if math.isfinite(hi) else 1.0
        while not math.isfinite(lo) and self.survival(a) <= t:
            a *= 2.0
        while not math.isfinite(hi) and self.survival(b) > t:
            b *= 2.0
        for _ in range(200):
            mid = 0.5 * (a + b)
            if self.survival(mid) > t:
                a = mid
            else:
                b = mid
            if b - a <= 1e-13 * max(1.0, abs(a), abs(b)):
                break
        return 0.5 * (a + b)

    # -- structure -----------------------------------------------------

    def atoms(self) -> list[tuple[float, float]]:
        """(location, mass) pairs; empty for continuous laws."""
        return []

    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    def is_discrete(self) -> bool:
        return bool(self.atoms())

    def quantile_grid(self, m: int) -> np.ndarray:
        """Quantiles at the m midpoint levels (i + 1/2)/m."""
        levels = (np.arange(m) + 0.5) / m
        return np.array([self.quantile(t) for t in levels])

    # -- moments and integrals ------------------------------------------

    def mean(self) -> float:
        raise NotImplementedError

    def second_moment(self) -> float:
        raise NotImplementedError

    def abs_moment(self) -> float:
        raise NotImplementedError

    def integral(self, f: Callable, breakpoints: Sequence[float] = ()) -> float:
        """Integral of f against the law; exact sums for atomic laws,
        adaptive quadrature split at ``breakpoints`` otherwise."""
        raise NotImplementedError

    def sample(self, rng, size: int) -> np.ndarray:
        raise NotImplementedError

    # -- config --------------------------------------------------------

    def to_config(self) -> dict:
        raise NotImplementedError

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"{type(self).__name__}({self.to_config()})"


class PointMass(Distribution):
    kind = "point-mass"

    def __init__(self, location: float):
        self.location = float(location)

    def cdf(self, y):
        return np.where(np.asarray(y, dtype=float) >= self.location, 1.0, 0.0)[()]

    def cdf_left(self, y):
        return np.where(np.asarray(y, dtype=float) > self.location, 1.0, 0.0)[()]

    def quantile(self, t):
        if t <= 0.0:
            return -math.inf
        if t > 1.0:
            return math.inf
        return self.location

    def upper_quantile(self, t):
        # survival is 1 below the atom, 0 from it on
        if t >= 1.0:
            return -math.inf
        return self.location if t >= 0.0 else math.inf

    def atoms(self):
        return [(self.location, 1.0)]

    def support(self):
        return (self.location, self.location)

    def mean(self):
        return self.location

    def second_moment(self):
        return self.location**2

    def abs_moment(self):
        return abs(self.location)

    def integral(self, f, breakpoints=()):
        return float(f(self.location))

    def sample(self, rng, size):
        return np.full(size, self.location)

    def to_config(self):
        return {"kind": "point-mass", "location": self.location}


class Uniform(Distribution):
    kind = "uniform"

    def __init__(self, lo: float, hi: float):
        if not hi > lo:
            raise ParameterError(f"uniform needs lo < hi, got [{lo}, {hi}]")
        self.lo = float(lo)
        self.hi = float(hi)

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        return np.clip((y - self.lo) / (self.hi - self.lo), 0.0, 1.0)[()]

    def cdf_left(self, y):
        return self.cdf(y)

    def quantile(self, t):
        if t <= 0.0:
            return -math.inf
        if t > 1.0:
            return math.inf
        return self.lo + t * (self.hi - self.lo)

    def upper_quantile(self, t):
        if t >= 1.0:
            return -math.inf
        if t < 0.0:
            return math.inf
        return self.hi - t * (self.hi - self.lo)

    def support(self):
        return (self.lo, self.hi)

    def mean(self):
        return 0.5 * (self.lo + self.hi)

    def second_moment(self):
        a, b = self.lo, self.hi
        return (a * a + a * b + b * b) / 3.0

    def abs_moment(self):
        a, b = self.lo, self.hi
        if a >= 0.0:
            return self.mean()
        if b <= 0.0:
            return -self.mean()
        return (a * a + b * b) / (2.0 * (b - a))

    def integral(self, f, breakpoints=()):
        pts = sorted(p for p in breakpoints if self.lo < p < self.hi)
        total = 0.0
        edges = [self.lo] + pts + [self.hi]
        for a, b in zip(edges[:-1], edges[1:]):
            val, _ = quad(f, a, b, **_QUAD_KW)
            total += val
        return total / (self.hi - self.lo)

    def sample(self, rng, size):
        return rng.uniform(self.lo, self.hi, size)

    def to_config(self):
        return {"kind": "uniform", "lo": self.lo, "hi": self.hi}


class Gaussian(Distribution):
    kind = "gaussian"

    def __init__(self, mean: float, sd: float):
        if not sd > 0:
            raise ParameterError(f"gaussian needs sd > 0, got {sd}")
        self.mu = float(mean)
        self.sd = float(sd)

    def cdf(self, y):
        return ndtr((np.asarray(y, dtype=float) - self.mu) / self.sd)[()]

    def cdf_left(self, y):
        return self.cdf(y)

    def pdf(self, y):
        z = (np.asarray(y, dtype=float) - self.mu) / self.sd
        return np.exp(-0.5 * z * z) / (self.sd * math.sqrt(2.0 * math.pi))

    def quantile(self, t):
        if t <= 0.0:
            return -math.inf
        if t >= 1.0:
            return math.inf
        return self.mu + self.sd * float(ndtri(t))

    def upper_quantile(self, t):
        if t >= 1.0:
            return -math.inf
        if t <= 0.0:
            return math.inf
        return self.mu + self.sd * float(ndtri(1.0 - t))

    def support(self):
        return (-math.inf, math.inf)

    def mean(self):
        return self.mu

    def second_moment(self):
        return self.mu**2 + self.sd**2

    def abs_moment(self):
        r = self.mu / self.sd
        return self.sd * math.sqrt(2.0 / math.pi) * math.exp(-0.5 * r * r) + self.mu * (
            1.0 - 2.0 * float(ndtr(-r))
        )

    def integral(self, f, breakpoints=()):
        pts = sorted(set(float(p) for p in breakpoints if math.isfinite(p)))
        edges = [-math.inf] + pts + [math.inf]
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            if a == b:
                continue
            val, _ = quad(lambda y: f(y) * self.pdf(y), a, b, **_QUAD_KW)
            total += val
        return total

    def sample(self, rng, size):
        return self.mu + self.sd * rng.standard_normal(size)

    def to_config(self):
        return {"kind": "gaussian", "mean": self.mu, "sd": self.sd}


class FiniteDiscrete(Distribution):
    """Finitely many atoms; weights must be nonnegative and sum to one
    within 1e-12."""

    kind = "finite-discrete"

    def __init__(self, locations, weights):
        locs = np.asarray(locations, dtype=float)
        wts = np.asarray(weights, dtype=float)
        if locs.ndim != 1 or locs.shape != wts.shape or locs.size == 0:
            raise InvariantError("atoms need matching nonempty location/weight lists")
        if np.any(wts < -_WEIGHT_TOL):
            raise InvariantError("negative atom weight")
        if abs(wts.sum() - 1.0) > _WEIGHT_TOL:
            raise InvariantError(f"weights sum to {wts.sum()!r}, not 1")
        order = np.argsort(locs, kind="stable")
        locs, wts = locs[order], wts[order]
        # merge duplicate locations
        keep = np.concatenate(([True], np.diff(locs) > 0))
        idx = np.cumsum(keep) - 1
        merged_w = np.zeros(int(idx[-1]) + 1)
        np.add.at(merged_w, idx, wts)
        self.locations = locs[keep]
        self.weights = merged_w
        self._cumw = np.cumsum(merged_w)
        self._cumw[-1] = 1.0

    def cdf(self, y):
        idx = np.searchsorted(self.locations, np.asarray(y, dtype=float), side="right")
        padded = np.concatenate(([0.0], self._cumw))
        return padded[idx][()]

    def cdf_left(self, y):
        idx = np.searchsorted(self.locations, np.asarray(y, dtype=float), side="left")
        padded = np.concatenate(([0.0], self._cumw))
        return padded[idx][()]

    def quantile(self, t):
        if t <= 0.0:
            return -math.inf
        if t > 1.0:
            return math.inf
        k = int(np.searchsorted(self._cumw, t, side="left"))
        return float(self.locations[min(k, len(self.locations) - 1)])

    def upper_quantile(self, t):
        if t >= 1.0:
            return -math.inf
        if t < 0.0:
            return math.inf
        surv = 1.0 - np.concatenate(([0.0], self._cumw))  # survival just below each atom
        keep = surv[:-1] > t  # atoms y_k with survival(y_k-) > t, i.e. sup candidates
        if not np.any(keep):
            return float(self.locations[0])
        return float(self.locations[np.nonzero(keep)[0][-1]])

    def atoms(self):
        return list(zip(self.locations.tolist(), self.weights.tolist()))

    def support(self):
        return (float(self.locations[0]), float(self.locations[-1]))

    def mean(self):
        return float(self.weights @ self.locations)

    def second_moment(self):
        return float(self.weights @ self.locations**2)

    def abs_moment(self):
        return float(self.weights @ np.abs(self.locations))

    def integral(self, f, breakpoints=()):
        try:
            vals = np.asarray(f(self.locations), dtype=float)
            if vals.shape != self.locations.shape:
                raise TypeError
        except Exception:
            vals = np.array([float(f(x)) for x in self.locations])
        return float(self.weights @ vals)

    def sample(self, rng, size):
        idx = rng.choice(len(self.locations), size=size, p=self.weights / self.weights.sum())
        return self.locations[idx]

    def to_config(self):
        return {
            "kind": "finite-discrete",
            "atoms": [[x, w] for x, w in self.atoms()],
        }


class EmpiricalMeasure(FiniteDiscrete):
    """Empirical law of a finite sample: mass 1/n at each observation.

    Keeps the raw sample around (ordered as given) and exposes the usual
    empirical CDF, which equals k/n at the k-th order statistic.
    """

    kind = "empirical"

    def __init__(self, sample):
        raw = np.asarray(sample, dtype=float)
        if raw.ndim != 1 or raw.size == 0:
            raise DomainError("empirical measure needs a nonempty 1-d sample")
        self.raw_sample = raw.copy()
        self.n = int(raw.size)
        self.sorted_sample = np.sort(raw, kind="stable")
        super().__init__(raw, np.full(raw.size, 1.0 / raw.size))
        # exact k/n levels (cumsum rounding would drift at the 1e-16 level)
        counts = np.searchsorted(self.sorted_sample, self.locations, side="right")
        self._cumw = counts / self.n
        self._cumw[-1] = 1.0
        self.weights = np.diff(np.concatenate(([0.0], self._cumw)))

    def order_statistic(self, k: int) -> float:
        """k-th order statistic, 1-based."""
        if not 1 <= k <= self.n:
            raise DomainError(f"order statistic index {k} outside 1..{self.n}")
        return float(self.sorted_sample[k - 1])

    def sample(self, rng, size):
        return self.sorted_sample[rng.integers(0, self.n, size)]

    def to_config(self):
        return {"kind": "empirical", "sample": self.raw_sample.tolist()}


class FoldedDistribution(Distribution):
    """Law of |X| for X distributed as ``base``; used for survival-quantile
    integrands of absolute values."""

    kind = "folded"

    def __init__(self, base: Distribution):
        self.base = base

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        out = np.asarray(self.base.cdf(y) - self.base.cdf_left(-y), dtype=float)
        return np.where(y < 0.0, 0.0, out)[()]

    def cdf_left(self, y):
        y = np.asarray(y, dtype=float)
        out = np.asarray(self.base.cdf_left(y) - self.base.cdf(-y), dtype=float)
        return np.where(y <= 0.0, 0.0, out)[()]

    def quantile(self, t):
        if t <= 0.0:
            return -math.inf
        if t > 1.0:
            return math.inf
        if isinstance(self.base, Gaussian) and self.base.mu == 0.0:
            return self.base.sd * float(ndtri(0.5 + 0.5 * t))
        lo, hi = 0.0, 1.0
        while self.cdf(hi) < t and hi < 1e300:
            hi *= 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) >= t:
                hi = mid
            else:
                lo = mid
        return hi

    def upper_quantile(self, t):
        if t >= 1.0:
            return -math.inf
        if t < 0.0:
            return math.inf
        if isinstance(self.base, Gaussian) and self.base.mu == 0.0:
            # survival(y) = 2(1 - Phi(y/sd)) for y >= 0
            return self.base.sd * float(ndtri(1.0 - 0.5 * t))
        if self.base.is_discrete():
            folded = absolute_law(self.base)
            return folded.upper_quantile(t)
        return super().upper_quantile(t)

    def atoms(self):
        merged: dict[float, float] = {}
        for x, w in self.base.atoms():
            merged[abs(x)] = merged.get(abs(x), 0.0) + w
        return sorted(merged.items())

    def support(self):
        lo, hi = self.base.support()
        if lo >= 0.0:
            return (lo, hi)
        if hi <= 0.0:
            return (-hi, -lo)
        return (0.0, max(hi, -lo))

    def mean(self):
        return self.base.abs_moment()

    def second_moment(self):
        return self.base.second_moment()

    def abs_moment(self):
        return self.base.abs_moment()

    def integral(self, f, breakpoints=()):
        pts = [p for p in breakpoints] + [-p for p in breakpoints] + [0.0]
        return self.base.integral(lambda y: f(abs(y)), breakpoints=pts)

    def sample(self, rng, size):
        return np.abs(self.base.sample(rng, size))

    def to_config(self):
        return {"kind": "folded", "base": self.base.to_config()}


def absolute_law(dist: Distribution) -> Distribution:
    """Law of |X|, in closed form where the kinds allow it."""
    if isinstance(dist, PointMass):
        return PointMass(abs(dist.location))
    if isinstance(dist, (EmpiricalMeasure, FiniteDiscrete)) or dist.is_discrete():
        locs, wts = zip(*dist.atoms())
        return FiniteDiscrete(np.abs(locs), wts)
    if isinstance(dist, Uniform):
        if dist.lo >= 0.0:
            return dist
        if dist.hi <= 0.0:
            return Uniform(-dist.hi, -dist.lo)
    return FoldedDistribution(dist)


# ---------------------------------------------------------------------------
# generalized inverses on arbitrary monotone callables
# ---------------------------------------------------------------------------


def left_inverse(F, t: float, bracket: tuple[float, float] | None = None) -> float:
    """inf{y : F(y) >= t} for a nondecreasing F, with inf{} = +inf.

    F may be a Distribution (closed forms / atom scans) or a plain callable,
    in which case ``bracket`` must enclose the crossing; bisection then
    resolves it to 1e-12.
    """
    if isinstance(F, Distribution):
        return F.quantile(t)
    if bracket is None:
        raise ParameterError("left_inverse on a callable needs a bracket")
    lo, hi = float(bracket[0]), float(bracket[1])
    if F(hi) < t:
        return math.inf
    if F(lo) >= t:
        return lo
    while hi - lo > 1e-12 * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if F(mid) >= t:
            hi = mid
        else:
            lo = mid
    return hi


def right_inverse(H, t: float, bracket: tuple[float, float] | None = None) -> float:
    """sup{y >= 0 : H(y) > t} for a nonincreasing H on the nonnegative axis,
    with sup{} = 0.

    H may be a Distribution, read as the survival function of that law; the
    result is then clamped to the nonnegative axis.
    """
    if isinstance(H, Distribution):
        return max(0.0, H.upper_quantile(t))
    if bracket is None:
        lo, hi = 0.0, 1.0
        while H(hi) > t and hi < 1e300:
            hi *= 2.0
        if hi >= 1e300:
            return math.inf
    else:
        lo, hi = float(bracket[0]), float(bracket[1])
        if H(hi) > t:
            return hi
    if H(lo) <= t:
        return 0.0
    while hi - lo > 1e-12 * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if H(mid) > t:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# quantile transformation
# ---------------------------------------------------------------------------


def quantile_transform(sample, marginal: Distribution, seed) -> np.ndarray:
    """Uniform variables U_i on (0,1] with ``marginal.quantile(U_i) == x_i``.

    On an atom of the marginal, U_i is drawn uniformly on the probability
    interval (F(x-), F(x)]; at continuity points U_i = F(x_i). The empirical
    CDF of the output therefore satisfies ``F_hat = G_hat o F`` at every
    point. The auxiliary randomness comes from the caller's seeded stream,
    so reruns with the same seed are bit-identical.
    """
    if isinstance(sample, EmpiricalMeasure):
        xs = sample.raw_sample
    else:
        xs = np.asarray(sample, dtype=float)
    if xs.ndim != 1 or xs.size == 0:
        raise DomainError("quantile_transform needs a nonempty 1-d sample")
    rng = _as_rng(seed)
    out = np.empty(xs.size)
    for i, x in enumerate(xs):
        hi = float(marginal.cdf(x))
        lo = float(marginal.cdf_left(x))
        if hi - lo > 0.0:
            # uniform on (lo, hi]; 1 - random() lies in (0, 1]
            out[i] = lo + (1.0 - rng.random()) * (hi - lo)
        else:
            if not _has_density_at(marginal, x):
                raise DomainError(
                    f"sample point index {i} (value {x!r}) has zero mass under the marginal"
                )
            out[i] = hi
    return out


def _has_density_at(marginal: Distribution, x: float) -> bool:
    if isinstance(marginal, Gaussian):
        return True
    if isinstance(marginal, Uniform):
        return marginal.lo - 1e-12 <= x <= marginal.hi + 1e-12
    if isinstance(marginal, FoldedDistribution):
        return x >= -1e-12 and (
            _has_density_at(marginal.base, x) or _has_density_at(marginal.base, -x)
        )
    # atomic kinds: continuity points carry no mass
    return False


# ---------------------------------------------------------------------------
# config parsing (shared with the lab's JSON format)
# ---------------------------------------------------------------------------


def distribution_from_config(cfg: dict) -> Distribution:
    """Build a law from the experiment-config dictionary form, e.g.
    ``{"kind": "gaussian", "mean": 0, "sd": 1}``."""
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise ParameterError(f"not a distribution config: {cfg!r}")
    kind = cfg["kind"]
    try:
        if kind == "point-mass":
            return PointMass(cfg["location"])
        if kind == "uniform":
            return Uniform(cfg["lo"], cfg["hi"])
        if kind == "gaussian":
            return Gaussian(cfg["mean"], cfg["sd"])
        if kind == "finite-discrete":
            locs, wts = zip(*cfg["atoms"])
            return FiniteDiscrete(locs, wts)
        if kind == "empirical":
            return EmpiricalMeasure(cfg["sample"])
        if kind == "folded":
            return FoldedDistribution(distribution_from_config(cfg["base"]))
    except KeyError as exc:
        raise ParameterError(f"distribution config {cfg!r} misses field {exc}") from exc
    raise ParameterError(f"unknown distribution kind {kind!r}")
