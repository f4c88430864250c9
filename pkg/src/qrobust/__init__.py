"""Probability metrics, strongly mixing process models, plug-in estimators,
and a Monte Carlo lab that stress-tests the uniform convergence and
robustness properties tying them together."""

from .distributions import (
    Distribution,
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
from .errors import (
    ConfigError,
    DivergenceError,
    DomainError,
    InvariantError,
    NotIntegrableError,
    ParameterError,
    QrobustError,
    TruncationError,
)
from .functionals import Functional, PairedSample, evaluate, parse_functional, plugin
from .metrics import (
    DenseFamily,
    GaugeFunction,
    kolmogorov_phi,
    levy,
    parse_gauge,
    psi_levy,
    psi_vague,
    uniform_phi_integrability,
    vague_distance,
)
from .processes import (
    LinearProcessSpec,
    MixingProfile,
    arma_ma_coeffs,
    causality_invertibility_check,
    invert_power_series,
    mixing_bound,
    mixing_profile,
    simulate_linear,
    spec_from_config,
    tail_double_sum,
)
from .prohorov import Coupling, FiniteLaw, FiniteMetricSpace, prohorov_distance, strassen_feasible
from .theory import BracketFamily, build_brackets, lln_tail_bound, rio_bound

__version__ = "0.1.0"

__all__ = [
    "Distribution", "EmpiricalMeasure", "FiniteDiscrete", "FoldedDistribution",
    "Gaussian", "PointMass", "Uniform", "absolute_law", "distribution_from_config",
    "left_inverse", "quantile_transform", "right_inverse",
    "ConfigError", "DivergenceError", "DomainError", "InvariantError",
    "NotIntegrableError", "ParameterError", "QrobustError", "TruncationError",
    "Functional", "PairedSample", "evaluate", "parse_functional", "plugin",
    "DenseFamily", "GaugeFunction", "kolmogorov_phi", "levy", "parse_gauge",
    "psi_levy", "psi_vague", "uniform_phi_integrability", "vague_distance",
    "LinearProcessSpec", "MixingProfile", "arma_ma_coeffs",
    "causality_invertibility_check", "invert_power_series", "mixing_bound",
    "mixing_profile", "simulate_linear", "spec_from_config", "tail_double_sum",
    "Coupling", "FiniteLaw", "FiniteMetricSpace", "prohorov_distance",
    "strassen_feasible",
    "BracketFamily", "build_brackets", "lln_tail_bound", "rio_bound",
    "__version__",
]
