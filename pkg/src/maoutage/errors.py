"""Exception hierarchy shared by every module.

Each exception carries a ``category`` string so the command line layer can
map failures to exit codes and machine readable error reports.
"""


class MaOutageError(Exception):
    category = "error"


class ConfigError(MaOutageError, ValueError):
    """Scenario configuration violates an invariant."""

    category = "config"


class TooFewAntennasError(ConfigError):
    """Zero forcing needs at least as many antennas as users."""


class OverlappingRegionsError(ConfigError):
    pass


class NonPositivePowerError(ConfigError):
    """A power, gain or noise level is not strictly positive."""


class OutageTargetError(ConfigError):
    pass


class NumericalError(MaOutageError, ArithmeticError):
    category = "numerical"


class IllConditionedError(NumericalError):
    """Gram matrix of the LoS channel is (numerically) singular."""


class NonPositiveVarianceError(NumericalError):
    """The ratio-moment approximation returned a negative variance."""


class DegenerateDistributionError(NumericalError):
    pass


class NonPositiveRateArgumentError(NumericalError):
    """The argument of the closed form rate logarithm is not positive."""


class CombinatorialLimitError(MaOutageError, ValueError):
    category = "config"


class RateClampWarning(RuntimeWarning):
    """A linearised outage threshold went negative and the rate was clamped to zero."""
