"""Exception types shared across the package."""


class DispersiveError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DispersiveError, ValueError):
    """A phase was evaluated outside its domain of validity."""


class ParameterError(DispersiveError, ValueError):
    """Model, band or exponent parameters violate a stated constraint."""


class FitError(DispersiveError):
    """A log-log regression could not be carried out."""


class QuadratureError(DispersiveError):
    """Adaptive quadrature did not converge.

    The partial estimate is kept on the exception so callers can decide
    whether it is still usable.
    """

    def __init__(self, message, value=None, abs_error=None):
        super().__init__(message)
        self.value = value
        self.abs_error = abs_error


class PredictionError(DispersiveError):
    """No decay lemma applies to the requested configuration.

    ``failed`` lists the predicates that did not verify.
    """

    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = list(failed)


class ConfigError(DispersiveError):
    """A configuration file or command-line flag could not be interpreted."""
