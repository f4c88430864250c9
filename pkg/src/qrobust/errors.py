"""Semantic exception hierarchy.

Public functions raise these instead of bare ValueError so callers can
distinguish bad parameters from genuine domain failures (a law outside the
metric's domain, a divergent coefficient sequence, a malformed input law).
"""


class QrobustError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(QrobustError, ValueError):
    """Invalid parameters: non-causal ARMA coefficients, a0 = 0, bad grids."""


class DomainError(QrobustError, ValueError):
    """Input outside an operation's domain (x <= 0, empty sample, point with
    zero mass under the marginal)."""


class NotIntegrableError(QrobustError):
    """A required gauge moment is infinite: the law lies outside the metric's
    domain of finite-gauge-moment laws."""


class DivergenceError(QrobustError):
    """A coefficient tail sum diverges (summability precondition fails)."""


class TruncationError(QrobustError):
    """The requested truncation budget cannot be met; ask for a larger cutoff."""


class InvariantError(QrobustError):
    """A structural invariant is violated (weights do not sum to one, coupling
    marginals off, distance matrix not metric)."""


class ConfigError(QrobustError, ValueError):
    """Malformed experiment configuration."""
