"""Exception and warning types shared across the package."""


class QETError(Exception):
    """Base class for all package errors."""


class DomainError(QETError, ValueError):
    """An input lies outside the domain where a formula or model applies."""


class PhaseDomainError(DomainError):
    """The chain parameters are outside the gapped paramagnetic phase (h > 1)."""


class ConfigError(QETError, ValueError):
    """Invalid run or repeater configuration.

    ``field`` names the offending configuration key when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class NumericalError(QETError, ArithmeticError):
    """A numerical procedure could not produce a trustworthy result."""


class DegenerateSpectrumError(NumericalError):
    """The single-particle spectrum has a zero mode below tolerance."""


class ConvergenceError(NumericalError):
    """An iterative procedure hit its iteration cap before converging."""


class ConditioningWarning(RuntimeWarning):
    """A pseudo-inverse discarded near-singular modes."""
