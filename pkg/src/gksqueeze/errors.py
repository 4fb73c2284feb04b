"""Exception and warning types shared across the package."""


class InvalidSpectrumError(ValueError):
    """A spectrum cannot be used (non-positive, non-finite or e_0 != 0)."""


class SingularSpectrumError(InvalidSpectrumError):
    """An eigenvalue rule hit a zero denominator or a vanishing nonlinearity."""


class SingularDualError(InvalidSpectrumError):
    """The dual eigenvalue n**2 / e_n is undefined because e_n == 0 for n >= 1."""


class SeriesError(ArithmeticError):
    """Base class for series that could not be truncated under a policy.

    The attached ``report`` is the :class:`~gksqueeze.states.ConvergenceReport`
    that led to the refusal.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DivergentSeriesError(SeriesError):
    """The normalization sum has no finite value (ratio test certifies growth)."""


class TruncationError(SeriesError):
    """The hard cap was reached before the tail tolerance was met."""


class ConfigError(ValueError):
    """A spectrum or sweep description could not be parsed."""


class ParameterWarning(UserWarning):
    """A parameter lies outside its physically motivated range but is usable."""


class AsymptoticSeriesWarning(UserWarning):
    """Terms beyond the truncation point grow back above the tolerance."""
