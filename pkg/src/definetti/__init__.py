"""Exact sample-mean laws of exchangeable Bernoulli sequences and their distance to the mixing measure."""

__version__ = "0.1.0"

from .edgeworth import (
    BernoulliMoments,
    admissible_xi,
    bound_scale,
    cf_error_ratio,
    edgeworth_cf,
    edgeworth_sup_error,
    exact_cf,
    exact_standardized_cdf,
    lattice_cdf_g,
    sawtooth,
)
from .exceptions import (
    ConfigError,
    DegenerateInputError,
    PreconditionError,
    QuadratureError,
    UnsupportedPriorError,
)
from .metrics import DistanceReport, distance, kolmogorov, levy, wasserstein
from .mixture import (
    SampleMeanLaw,
    beta_power_cdf,
    complement_law,
    law_cdf,
    polya_sample,
    sample_mean_law,
    smoothing_cdf,
    wendel_bounds,
)
from .priors import Beta, Cantor, Discrete, PolyDensity, Prior, prior_from_dict
from .rates import ConvergenceRateEstimator, LogLogRegressor, RateFit, fit_loglog
from .regularity import (
    Decomposition,
    decompose_polynomial,
    m_constant,
    second_difference_sup,
    tail_bound_check,
)
from .suite import SuiteConfig, load_config, rate_scan, run_suite

__all__ = [
    "Prior", "Beta", "PolyDensity", "Discrete", "Cantor", "prior_from_dict",
    "SampleMeanLaw", "sample_mean_law", "law_cdf", "smoothing_cdf", "beta_power_cdf",
    "wendel_bounds", "complement_law", "polya_sample",
    "DistanceReport", "kolmogorov", "wasserstein", "levy", "distance",
    "Decomposition", "decompose_polynomial", "m_constant", "tail_bound_check",
    "second_difference_sup",
    "BernoulliMoments", "exact_cf", "edgeworth_cf", "admissible_xi", "bound_scale",
    "cf_error_ratio", "sawtooth", "lattice_cdf_g", "exact_standardized_cdf",
    "edgeworth_sup_error",
    "RateFit", "LogLogRegressor", "ConvergenceRateEstimator", "fit_loglog",
    "SuiteConfig", "load_config", "rate_scan", "run_suite",
    "UnsupportedPriorError", "PreconditionError", "QuadratureError", "DegenerateInputError",
    "ConfigError",
]
