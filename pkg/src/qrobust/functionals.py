"""Statistical functionals and their plug-in estimators.

A functional maps a law to a real number; its plug-in estimator applies the
functional to the empirical law of the first n observations. Supported
kinds: mean, second moment, variance (population style, divisor n, so the
value at n = 1 is 0), lower alpha-quantile (the left-continuous inverse of
the CDF at alpha; flat regions resolve to the left inverse, no error), and
covariance over paired real samples carried as two aligned sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import Distribution, EmpiricalMeasure
from .errors import DomainError, NotIntegrableError, ParameterError

__all__ = ["Functional", "PairedSample", "parse_functional", "evaluate", "plugin"]

_KINDS = ("mean", "second-moment", "variance", "lower-quantile", "covariance")


@dataclass(frozen=True)
class Functional:
    kind: str
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ParameterError(f"unknown functional kind {self.kind!r}")
        if self.kind == "lower-quantile":
            if self.alpha is None or not 0.0 < self.alpha < 1.0:
                raise ParameterError("quantile level must lie strictly in (0, 1)")

    @property
    def descriptor(self) -> str:
        if self.kind == "lower-quantile":
            return f"quantile:{self.alpha:g}"
        return self.kind


def parse_functional(descriptor: str) -> Functional:
    """Functional from its config name: "mean", "variance", "second-moment",
    "quantile:0.25", "covariance"."""
    if descriptor.startswith("quantile:"):
        return Functional("lower-quantile", float(descriptor.split(":", 1)[1]))
    if descriptor == "quantile":
        raise ParameterError("quantile functional needs a level, e.g. quantile:0.25")
    return Functional(descriptor)


@dataclass(frozen=True)
class PairedSample:
    """Aligned observation pairs (x_i, y_i) for the covariance functional."""

    xs: np.ndarray
    ys: np.ndarray

    def __init__(self, xs, ys):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size == 0:
            raise DomainError("paired sample needs two aligned nonempty sequences")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return int(self.xs.size)


def evaluate(functional: Functional, mu) -> float:
    """Value of the functional at a law (or at a paired sample, for the
    covariance)."""
    if functional.kind == "covariance":
        if not isinstance(mu, PairedSample):
            raise DomainError("covariance needs a paired sample over the plane")
        mx = mu.xs.mean()
        my = mu.ys.mean()
        return float(((mu.xs - mx) * (mu.ys - my)).mean())
    if not isinstance(mu, Distribution):
        raise DomainError(f"{functional.kind} needs a law on the real line")
    if functional.kind == "lower-quantile":
        return mu.quantile(functional.alpha)
    first = mu.mean()
    if functional.kind == "mean":
        value = first
    elif functional.kind == "second-moment":
        value = mu.second_moment()
    else:  # variance
        value = mu.second_moment() - first**2
    if not math.isfinite(value):
        raise NotIntegrableError(f"{functional.kind} moment is not finite")
    return float(value)


def plugin(functional: Functional, sample) -> float:
    """Plug-in estimate: the functional applied to the empirical law of the
    sample. For the covariance, pass a PairedSample."""
    if functional.kind == "covariance":
        if not isinstance(sample, PairedSample):
            raise DomainError("covariance plug-in needs a PairedSample")
        return evaluate(functional, sample)
    if isinstance(sample, EmpiricalMeasure):
        emp = sample
    else:
        arr = np.asarray(sample, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("plug-in estimator needs a nonempty sample")
        emp = EmpiricalMeasure(arr)
    return evaluate(functional, emp)
