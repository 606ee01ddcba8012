"""Outage-aware antenna position optimisation for multiuser MISO downlinks.

Antennas that can move inside small regions reshape the line-of-sight
channel.  This package models the Rician downlink under statistical zero
forcing, approximates each user's SINR by a moment-matched Gamma law, turns
the outage-constrained rate into a closed form, and maximises the sum of
those rates over antenna positions by projected gradient ascent.
"""

__version__ = "0.1.0"

from .config import Region, SystemConfig, config_from_dict, config_to_dict, load_config, validate_config
from .errors import (
    CombinatorialLimitError,
    ConfigError,
    DegenerateDistributionError,
    IllConditionedError,
    MaOutageError,
    NonPositiveRateArgumentError,
    NonPositiveVarianceError,
    NumericalError,
    RateClampWarning,
)
from .beamforming import gram_inverse, zf_beamformers
from .statistics import GammaFit, gamma_fit, moment_set
from .rate import TABLE_I, exact_rates, linearization, sum_rate, user_rates
from .gradients import objective_gradient
from .optimizer import PgaConfig, multi_start, pga_run, project
from .oracle import cdf_distance, empirical_outage_rate, sample_sinr
from .benchmarks import as_best, fpa_layout, rap_best, rula_best

__all__ = [
    "__version__",
    "Region", "SystemConfig", "config_from_dict", "config_to_dict", "load_config", "validate_config",
    "MaOutageError", "ConfigError", "NumericalError", "IllConditionedError",
    "NonPositiveVarianceError", "DegenerateDistributionError", "NonPositiveRateArgumentError",
    "CombinatorialLimitError", "RateClampWarning",
    "gram_inverse", "zf_beamformers",
    "GammaFit", "gamma_fit", "moment_set",
    "TABLE_I", "linearization", "user_rates", "sum_rate", "exact_rates",
    "objective_gradient",
    "PgaConfig", "pga_run", "multi_start", "project",
    "sample_sinr", "empirical_outage_rate", "cdf_distance",
    "fpa_layout", "rap_best", "as_best", "rula_best",
]
