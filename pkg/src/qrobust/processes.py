"""Linear process models and their strong-mixing machinery.

A linear process is X_t = sum_{s>=0} a_s Z_{t-s} with i.i.d. noise Z and
a_0 = 1. Coefficient sequences come from closed-form generators:

* ``arma(p, q)``: rational coefficients from the division of the MA
  characteristic polynomial by the AR one (requires causality and
  invertibility: all roots strictly outside the closed unit disk, no common
  zeros);
* ``geometric``: a_0 = 1, a_s = a * q^s for s >= 1;
* ``explicit``: a finite list.

The strong-mixing coefficient of such a process is bounded by

    alpha(n) <= (2 M E|Z_1| sum_s |b_s|) * sum_{u>=n} sum_{s>=u} |a_s|,

where b is the power-series inverse of a and M is a total-variation
Lipschitz constant of the noise density (``int |f(y+h) - f(y)| dy <= M|h|``).
For ARMA(1,1) both factors have closed forms:

    sum_s |b_s|            = 1 + |phi1 + theta1| / (1 - |theta1|),
    sum_u sum_s>=u |a_s|   = (|phi1 + theta1| / (1 - |phi1|)^2) |phi1|^(n-1).

For higher orders the package sums directly and certifies the remainder with
a geometric envelope extracted from companion-matrix powers. Every mixing
value is capped at 1/4 (the universal bound; by convention alpha(0) = 1/4).

Admissible M constants: for Gaussian noise the density's total variation is
``int |f'| = 2 f(mode)``, so M = sqrt(2/pi)/sd; for uniform noise on [a, b],
M = 2/(b - a). Other noise kinds need an explicit constant.

Simulation truncates the moving-average sum once the certified coefficient
tail times E|Z_1| drops below the truncation budget, and starts the seeded
noise stream at index 1 - s_max so the first output sample is already
(truncated-)stationary. Replicates draw independent streams from hashed
(master seed, replicate) keys, so runs are bit-reproducible and
parallelizable without shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .distributions import (
    Distribution,
    Gaussian,
    PointMass,
    Uniform,
    distribution_from_config,
)
from .errors import DivergenceError, ParameterError, TruncationError

__all__ = [
    "RootCheck",
    "causality_invertibility_check",
    "arma_ma_coeffs",
    "invert_power_series",
    "CoefficientGenerator",
    "ArmaCoefficients",
    "GeometricCoefficients",
    "ExplicitCoefficients",
    "LinearProcessSpec",
    "MixingProfile",
    "mixing_bound",
    "mixing_profile",
    "tail_double_sum",
    "simulate_linear",
    "noise_density_tv_constant",
    "spec_from_config",
]

_MAX_DEGREE = 8
_ROOT_TOL = 1e-9
ALPHA_CAP = 0.25


# ---------------------------------------------------------------------------
# characteristic polynomials
# ---------------------------------------------------------------------------


def _trim(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=float).ravel()
    nz = np.nonzero(v)[0]
    return v[: nz[-1] + 1] if nz.size else np.empty(0)


@dataclass(frozen=True)
class RootCheck:
    """Structured result of the causality / invertibility test."""

    passed: bool
    ar_roots: tuple[complex, ...]
    ma_roots: tuple[complex, ...]
    failures: tuple[str, ...]

    def require(self) -> None:
        if not self.passed:
            raise ParameterError("; ".join(self.failures))


def causality_invertibility_check(phi: Sequence[float], theta: Sequence[float]) -> RootCheck:
    """Pass iff the AR polynomial 1 - sum phi_s z^s and the MA polynomial
    1 + sum theta_s z^s have all roots strictly outside the closed unit disk
    and share no common zero (root tolerance 1e-9)."""
    phi = _trim(phi)
    theta = _trim(theta)
    if len(phi) > _MAX_DEGREE or len(theta) > _MAX_DEGREE:
        raise ParameterError(f"polynomial degree above {_MAX_DEGREE} not supported")
    ar_roots = _poly_roots(np.concatenate(([1.0], -phi)))
    ma_roots = _poly_roots(np.concatenate(([1.0], theta)))
    failures = []
    for name, roots in (("AR", ar_roots), ("MA", ma_roots)):
        for r in roots:
            if abs(r) <= 1.0 + _ROOT_TOL:
                failures.append(f"{name} root {r:.6g} inside or on the unit disk")
    for r1 in ar_roots:
        for r2 in ma_roots:
            if abs(r1 - r2) <= _ROOT_TOL:
                failures.append(f"common zero {r1:.6g} of the AR and MA polynomials")
    return RootCheck(not failures, tuple(ar_roots), tuple(ma_roots), tuple(failures))


def _poly_roots(coeffs_ascending: np.ndarray) -> list[complex]:
    c = _trim(coeffs_ascending)
    if len(c) <= 1:
        return []
    return [complex(r) for r in np.polynomial.polynomial.polyroots(c)]


def arma_ma_coeffs(phi: Sequence[float], theta: Sequence[float], s_max: int) -> np.ndarray:
    """MA(inf) coefficients a_0..a_s_max of a causal invertible ARMA model,
    by the division recursion a_s = theta_s + sum_j phi_j a_{s-j}."""
    causality_invertibility_check(phi, theta).require()
    phi = _trim(phi)
    theta = _trim(theta)
    a = np.zeros(s_max + 1)
    a[0] = 1.0
    for s in range(1, s_max + 1):
        val = theta[s - 1] if s - 1 < len(theta) else 0.0
        for j in range(1, min(s, len(phi)) + 1):
            val += phi[j - 1] * a[s - j]
        a[s] = val
    return a


def invert_power_series(a: Sequence[float], s_max: int) -> np.ndarray:
    """Coefficients b_0..b_s_max of 1 / sum_s a_s z^s, so that the
    convolution sum_j a_j b_{s-j} equals 1 at s = 0 and 0 beyond."""
    a = np.asarray(a, dtype=float).ravel()
    if a.size == 0 or a[0] == 0.0:
        raise ParameterError("power series inversion needs a_0 != 0")
    b = np.zeros(s_max + 1)
    b[0] = 1.0 / a[0]
    for s in range(1, s_max + 1):
        acc = 0.0
        for j in range(1, min(s, a.size - 1) + 1):
            acc += a[j] * b[s - j]
        b[s] = -acc / a[0]
    return b


# ---------------------------------------------------------------------------
# certified geometric envelopes for recursive coefficient sequences
# ---------------------------------------------------------------------------


def _companion(rec: np.ndarray) -> np.ndarray:
    """Companion matrix of x_s = sum_j rec[j-1] * x_{s-j}."""
    d = len(rec)
    C = np.zeros((d, d))
    C[0, :] = rec
    if d > 1:
        C[1:, :-1] = np.eye(d - 1)
    return C


def _envelope(rec: np.ndarray, seq_head: np.ndarray, s0: int) -> tuple[float, float]:
    """(D, lam) with |x_s| <= D * lam^s for all s >= s0, where x follows the
    linear recursion ``rec`` from s > s0 and seq_head holds x_0..x_s0."""
    d = len(rec)
    if d == 0:
        return 0.0, 0.5
    C = _companion(rec)
    norm_max = 1.0
    P = np.eye(d)
    m = None
    for k in range(1, 600):
        P = P @ C
        nk = float(np.abs(P).sum(axis=1).max())
        norm_max = max(norm_max, nk)
        if nk <= 0.5:
            m = k
            break
    if m is None:
        raise DivergenceError("coefficient recursion does not decay geometrically")
    lam = 0.5 ** (1.0 / m)
    v0 = float(np.abs(seq_head[max(0, s0 - d + 1): s0 + 1]).max()) if s0 >= 0 else 0.0
    D = 2.0 * norm_max * v0 * lam ** (-s0) if v0 > 0 else 0.0
    return D, lam


# ---------------------------------------------------------------------------
# coefficient generators
# ---------------------------------------------------------------------------


class CoefficientGenerator:
    """Closed-form description of an MA(inf) coefficient sequence with
    certified tail bounds."""

    descriptor: str = "abstract"

    def coeffs(self, s_max: int) -> np.ndarray:
        raise NotImplementedError

    def abs_tail(self, S: int) -> float:
        """Upper bound on sum_{s >= S} |a_s|."""
        raise NotImplementedError

    def tail_double_sum(self, n: int) -> float:
        """sum_{u >= n} sum_{s >= u} |a_s| for n >= 1 (closed form where
        available, otherwise direct summation with a certified remainder)."""
        raise NotImplementedError

    def sum_abs_b(self) -> float:
        """Upper bound on sum_s |b_s| for the inverse series."""
        raise NotImplementedError

    def check_roots(self) -> RootCheck:
        raise NotImplementedError

    def is_trivial(self) -> bool:
        """True when a = (1, 0, 0, ...), i.e. the process is i.i.d. noise."""
        return False


class ArmaCoefficients(CoefficientGenerator):
    def __init__(self, phi: Sequence[float], theta: Sequence[float]):
        self.phi = _trim(phi)
        self.theta = _trim(theta)
        if len(self.phi) > _MAX_DEGREE or len(self.theta) > _MAX_DEGREE:
            raise ParameterError(f"ARMA order above {_MAX_DEGREE} not supported")
        self.p = len(self.phi)
        self.q = len(self.theta)
        self.descriptor = (
            "arma(phi=[" + ",".join(f"{v:g}" for v in self.phi) + "],theta=["
            + ",".join(f"{v:g}" for v in self.theta) + "])"
        )

    def check_roots(self) -> RootCheck:
        return causality_invertibility_check(self.phi, self.theta)

    def is_trivial(self) -> bool:
        return self.p == 0 and self.q == 0

    def coeffs(self, s_max: int) -> np.ndarray:
        return arma_ma_coeffs(self.phi, self.theta, s_max)

    def _order_one(self) -> tuple[float, float] | None:
        if self.p <= 1 and self.q <= 1:
            phi1 = float(self.phi[0]) if self.p else 0.0
            theta1 = float(self.theta[0]) if self.q else 0.0
            return phi1, theta1
        return None

    def abs_tail(self, S: int) -> float:
        one = self._order_one()
        if one is not None:
            phi1, theta1 = one
            if abs(phi1) >= 1.0:
                raise DivergenceError(f"AR coefficient |phi1| = {abs(phi1):g} >= 1")
            if S <= 0:
                return 1.0 + self.abs_tail(1)
            return abs(phi1 + theta1) * abs(phi1) ** (S - 1) / (1.0 - abs(phi1))
        return self._generic_abs_tail(S)

    def tail_double_sum(self, n: int) -> float:
        if n < 1:
            raise ParameterError("tail double sum is defined for n >= 1")
        self.check_roots().require()
        one = self._order_one()
        if one is not None:
            phi1, theta1 = one
            return abs(phi1 + theta1) / (1.0 - abs(phi1)) ** 2 * abs(phi1) ** (n - 1)
        return _weighted_tail_sum(self, n)

    def sum_abs_b(self) -> float:
        self.check_roots().require()
        one = self._order_one()
        if one is not None:
            phi1, theta1 = one
            return 1.0 + abs(phi1 + theta1) / (1.0 - abs(theta1))
        # b is the expansion of (AR polynomial) / (MA polynomial)
        rec = -self.theta
        head_len = max(self.p, self.q) + self.q + 2
        b = invert_power_series(self.coeffs(head_len + 1), head_len)
        D, lam = _envelope(rec, b, head_len - 1)
        total = float(np.abs(b[:head_len]).sum())
        return total + D * lam**head_len / (1.0 - lam)

    def _generic_abs_tail(self, S: int) -> float:
        rec = self.phi
        head_len = max(self.p, self.q + 1) + self.p + 2
        a = self.coeffs(max(head_len, S) + 1)
        D, lam = _envelope(rec, a, head_len - 1)
        upto = max(head_len, S)
        direct = float(np.abs(a[S: upto + 1]).sum()) if S <= upto else 0.0
        return direct + D * lam ** (upto + 1) / (1.0 - lam)

    def _envelope_params(self) -> tuple[float, float, int, np.ndarray]:
        rec = self.phi
        head_len = max(self.p, self.q + 1) + self.p + 2
        a = self.coeffs(head_len)
        D, lam = _envelope(rec, a, head_len - 1)
        return D, lam, head_len, a


class GeometricCoefficients(CoefficientGenerator):
    """a_0 = 1 and a_s = a * q^s for s >= 1."""

    def __init__(self, a: float, q: float):
        self.a = float(a)
        self.q = float(q)
        self.descriptor = f"geometric(a={self.a:g},q={self.q:g})"

    def check_roots(self) -> RootCheck:
        # the series sums to (1 - (1-a) q z) / (1 - q z); its only zero is
        # 1 / ((1-a) q), outside the closed disk iff |(1-a) q| < 1
        if self.a == 0.0 or self.q == 0.0:
            return RootCheck(True, (), (), ())
        failures = []
        if abs(self.q) >= 1.0:
            failures.append(f"geometric ratio |q| = {abs(self.q):g} >= 1")
        z = (1.0 - self.a) * self.q
        if abs(z) >= 1.0 - _ROOT_TOL:
            failures.append(f"series zero at 1/{z:g} inside or on the unit disk")
        roots = (complex(1.0 / z),) if z != 0 else ()
        return RootCheck(not failures, roots, (), tuple(failures))

    def is_trivial(self) -> bool:
        return self.a == 0.0 or self.q == 0.0

    def coeffs(self, s_max: int) -> np.ndarray:
        out = self.a * self.q ** np.arange(s_max + 1, dtype=float)
        out[0] = 1.0
        return out

    def _require_summable(self) -> None:
        if abs(self.q) >= 1.0 and self.a != 0.0:
            raise DivergenceError(f"geometric tail with |q| = {abs(self.q):g} >= 1 diverges")

    def abs_tail(self, S: int) -> float:
        self._require_summable()
        if S <= 0:
            return 1.0 + self.abs_tail(1)
        if self.a == 0.0:
            return 0.0
        return abs(self.a) * abs(self.q) ** S / (1.0 - abs(self.q))

    def tail_double_sum(self, n: int) -> float:
        if n < 1:
            raise ParameterError("tail double sum is defined for n >= 1")
        self._require_summable()
        if self.a == 0.0:
            return 0.0
        return abs(self.a) * abs(self.q) ** n / (1.0 - abs(self.q)) ** 2

    def sum_abs_b(self) -> float:
        self.check_roots().require()
        z = abs((1.0 - self.a) * self.q)
        return 1.0 + abs(self.a * self.q) / (1.0 - z)


class ExplicitCoefficients(CoefficientGenerator):
    def __init__(self, coeffs: Sequence[float]):
        c = np.asarray(coeffs, dtype=float).ravel()
        if c.size == 0:
            raise ParameterError("explicit coefficient list must be nonempty")
        self._c = c
        self.descriptor = "explicit[" + ",".join(f"{v:g}" for v in c) + "]"

    def check_roots(self) -> RootCheck:
        roots = _poly_roots(self._c)
        failures = [
            f"series zero {r:.6g} inside or on the unit disk"
            for r in roots
            if abs(r) <= 1.0 + _ROOT_TOL
        ]
        return RootCheck(not failures, tuple(roots), (), tuple(failures))

    def is_trivial(self) -> bool:
        return self._c.size == 1 or not np.any(self._c[1:])

    def coeffs(self, s_max: int) -> np.ndarray:
        out = np.zeros(s_max + 1)
        upto = min(s_max + 1, self._c.size)
        out[:upto] = self._c[:upto]
        return out

    def abs_tail(self, S: int) -> float:
        if S >= self._c.size:
            return 0.0
        return float(np.abs(self._c[max(S, 0):]).sum())

    def tail_double_sum(self, n: int) -> float:
        if n < 1:
            raise ParameterError("tail double sum is defined for n >= 1")
        s = np.arange(self._c.size)
        w = np.maximum(s - n + 1, 0)
        return float((w * np.abs(self._c)).sum())

    def sum_abs_b(self) -> float:
        if len(self._c) > _MAX_DEGREE + 1:
            raise ParameterError(f"series inversion beyond degree {_MAX_DEGREE} not supported")
        self.check_roots().require()
        if self._c.size == 1:
            return 1.0 / abs(self._c[0])
        rec = -self._c[1:] / self._c[0]
        head_len = 3 * self._c.size + 2
        b = invert_power_series(self._c, head_len)
        D, lam = _envelope(rec, b, head_len - 1)
        return float(np.abs(b[:head_len]).sum()) + D * lam**head_len / (1.0 - lam)


def _weighted_tail_sum(gen: CoefficientGenerator, n: int) -> float:
    """Direct evaluation of sum_{s>=n} (s - n + 1) |a_s| with a certified
    geometric remainder (general ARMA orders)."""
    D, lam, head_len, _ = gen._envelope_params()  # type: ignore[attr-defined]
    S = head_len
    total_prev = -1.0
    while True:
        a = gen.coeffs(S)
        s = np.arange(n, S + 1)
        direct = float(((s - n + 1) * np.abs(a[n:])).sum())
        rem = D * lam ** (S + 1) * ((S + 2 - n) + lam / (1.0 - lam)) / (1.0 - lam)
        if rem <= 1e-13 * max(direct, 1e-300) or S > 200_000:
            return direct + rem
        if direct == total_prev and rem < 1e-15:
            return direct + rem
        total_prev = direct
        S *= 2


def tail_double_sum(gen: CoefficientGenerator, n: int) -> float:
    """sum_{u>=n} sum_{s>=u} |a_s| of the generator's coefficient sequence."""
    return gen.tail_double_sum(n)


# ---------------------------------------------------------------------------
# process specification and the mixing bound
# ---------------------------------------------------------------------------


def noise_density_tv_constant(noise: Distribution) -> Optional[float]:
    """Admissible total-variation Lipschitz constant of the noise density:
    the Gaussian density has int |f'| = 2 f(mode) = sqrt(2/pi)/sd, the
    uniform density on [a, b] shifts by mass 2h/(b - a). None when no
    smooth-density constant is available for the kind."""
    if isinstance(noise, Gaussian):
        return math.sqrt(2.0 / math.pi) / noise.sd
    if isinstance(noise, Uniform):
        return 2.0 / (noise.hi - noise.lo)
    return None


class LinearProcessSpec:
    """Noise law plus MA(inf) coefficient generator (a_0 = 1), and the
    constants entering the mixing bound: M (noise density TV-Lipschitz
    constant, derived for Gaussian/uniform noise unless overridden) and
    L = E|Z_1|."""

    def __init__(self, generator: CoefficientGenerator, noise: Distribution,
                 m_const: float | None = None):
        head = generator.coeffs(0)
        if abs(head[0] - 1.0) > 1e-12:
            raise ParameterError("linear process specs require a_0 = 1")
        self.generator = generator
        self.noise = noise
        self._m_override = m_const

    # -- constructors ----------------------------------------------------

    @classmethod
    def arma(cls, phi, theta, noise: Distribution, m_const: float | None = None):
        return cls(ArmaCoefficients(phi, theta), noise, m_const)

    @classmethod
    def geometric(cls, a: float, q: float, noise: Distribution, m_const: float | None = None):
        return cls(GeometricCoefficients(a, q), noise, m_const)

    @classmethod
    def explicit(cls, coeffs, noise: Distribution, m_const: float | None = None):
        return cls(ExplicitCoefficients(coeffs), noise, m_const)

    @classmethod
    def iid(cls, noise: Distribution, m_const: float | None = None):
        return cls(ExplicitCoefficients([1.0]), noise, m_const)

    # -- constants -------------------------------------------------------

    @property
    def m_const(self) -> float:
        m = self._m_override if self._m_override is not None else noise_density_tv_constant(self.noise)
        if m is None:
            raise ParameterError(
                "no density-smoothness constant available for this noise kind; "
                "pass m_const explicitly"
            )
        return m

    @property
    def noise_abs_mean(self) -> float:
        return self.noise.abs_moment()

    @property
    def descriptor(self) -> str:
        return f"{self.generator.descriptor}|noise={self.noise.to_config()}"

    # -- derived laws ----------------------------------------------------

    def coefficient_sums(self, tol: float = 1e-15) -> tuple[float, float]:
        """(sum a_s, sum a_s^2) of the full series, truncated once the
        certified coefficient tail drops below tol."""
        S = 64
        while self.generator.abs_tail(S + 1) > tol and S < 200_000:
            S *= 2
        a = self.generator.coeffs(S)
        return float(a.sum()), float((a * a).sum())

    def marginal_law(self) -> Optional[Distribution]:
        """Closed-form stationary marginal where one exists: the noise law
        itself for trivial coefficients, a Gaussian for Gaussian noise, a
        point mass for point-mass noise; None otherwise."""
        if self.generator.is_trivial():
            return self.noise
        if isinstance(self.noise, Gaussian):
            a1, a2 = self.coefficient_sums()
            return Gaussian(self.noise.mu * a1, self.noise.sd * math.sqrt(a2))
        if isinstance(self.noise, PointMass):
            a1, _ = self.coefficient_sums()
            return PointMass(self.noise.location * a1)
        return None

    def to_config(self) -> dict:
        gen = self.generator
        if isinstance(gen, ArmaCoefficients):
            cfg = {"kind": "arma", "phi": gen.phi.tolist(), "theta": gen.theta.tolist()}
        elif isinstance(gen, GeometricCoefficients):
            cfg = {"kind": "geometric", "a": gen.a, "q": gen.q}
        else:
            cfg = {"kind": "explicit", "coeffs": gen._c.tolist()}  # type: ignore[attr-defined]
        cfg["noise"] = self.noise.to_config()
        if self._m_override is not None:
            cfg["m_const"] = self._m_override
        return cfg


@dataclass(frozen=True)
class MixingProfile:
    """Upper bound on the strong-mixing coefficients: n maps to
    min(1/4, prefactor * tail(n)), with the universal value 1/4 at n = 0."""

    prefactor: float
    tail: Callable[[int], float]
    descriptor: str = ""

    def __call__(self, n: int) -> float:
        if n <= 0:
            return ALPHA_CAP
        return min(ALPHA_CAP, self.prefactor * self.tail(n))

    def values(self, n: int) -> np.ndarray:
        """alpha bound at lags 0 .. n-1."""
        return np.array([self(j) for j in range(n)])


def mixing_profile(spec: LinearProcessSpec) -> MixingProfile:
    """The closed-form mixing bound profile of a linear process spec."""
    spec.generator.check_roots().require()
    prefactor = 2.0 * spec.m_const * spec.noise_abs_mean * spec.generator.sum_abs_b()
    return MixingProfile(prefactor, spec.generator.tail_double_sum, spec.descriptor)


def mixing_bound(spec: LinearProcessSpec, n: int) -> float:
    """min(1/4, 2 * M * E|Z_1| * sum|b_s| * tail_double_sum(n)); the value at
    n = 0 is the universal 1/4."""
    return mixing_profile(spec)(n)


# ---------------------------------------------------------------------------
# simulation
# ---------------------------------------------------------------------------


def default_s_max(spec: LinearProcessSpec, budget: float = 1e-10,
                  cap: int = 10_000) -> int:
    """Smallest s with certified tail sum * E|Z_1| below the budget."""
    L = spec.noise_abs_mean
    if L == 0.0 or spec.generator.abs_tail(1) == 0.0:
        return _finite_length(spec)
    lo, hi = 0, 1
    while spec.generator.abs_tail(hi + 1) * L > budget:
        lo, hi = hi, hi * 2
        if hi > cap:
            if spec.generator.abs_tail(cap + 1) * L > budget:
                raise TruncationError(
                    f"coefficient tail still above budget {budget:g} at the cap {cap}"
                )
            hi = cap
            break
    while lo < hi:
        mid = (lo + hi) // 2
        if spec.generator.abs_tail(mid + 1) * L <= budget:
            hi = mid
        else:
            lo = mid + 1
    return max(lo, _finite_length(spec))


def _finite_length(spec: LinearProcessSpec) -> int:
    gen = spec.generator
    if isinstance(gen, ExplicitCoefficients):
        return gen._c.size - 1
    return 0


def simulate_linear(spec: LinearProcessSpec, n: int, seed,
                    s_max: int | None = None, budget: float = 1e-10) -> np.ndarray:
    """Path X_1..X_n of the truncated moving average over one seeded noise
    stream Z_{1-s_max}..Z_n. Identical seeds give bit-identical paths."""
    if n < 1:
        raise ParameterError("simulate_linear needs n >= 1")
    if s_max is None:
        s_max = default_s_max(spec, budget)
    elif spec.generator.abs_tail(s_max + 1) * spec.noise_abs_mean > budget:
        raise TruncationError(
            f"truncation budget {budget:g} exceeded at s_max = {s_max}; increase s_max"
        )
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = spec.noise.sample(rng, n + s_max)
    a = spec.generator.coeffs(s_max)
    return np.convolve(z, a, mode="valid")


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------


def spec_from_config(cfg: dict) -> LinearProcessSpec:
    """Process spec from its dictionary form, e.g.
    ``{"kind": "arma", "phi": [0.5], "theta": [0.3],
       "noise": {"kind": "gaussian", "mean": 0, "sd": 1}}``."""
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise ParameterError(f"not a process config: {cfg!r}")
    noise = distribution_from_config(cfg.get("noise", {"kind": "gaussian", "mean": 0.0, "sd": 1.0}))
    m_const = cfg.get("m_const")
    kind = cfg["kind"]
    if kind == "arma":
        return LinearProcessSpec.arma(cfg.get("phi", []), cfg.get("theta", []), noise, m_const)
    if kind == "geometric":
        return LinearProcessSpec.geometric(cfg["a"], cfg["q"], noise, m_const)
    if kind == "explicit":
        return LinearProcessSpec.explicit(cfg["coeffs"], noise, m_const)
    if kind == "iid":
        return LinearProcessSpec.iid(noise, m_const)
    raise ParameterError(f"unknown process kind {kind!r}")
