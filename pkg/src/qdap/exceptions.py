"""Exception hierarchy for the qdap package."""


class QdapError(Exception):
    """Base class for all errors raised by qdap."""


class EstimationError(QdapError, ValueError):
    """Raised when class moments cannot be estimated from the data."""


class DimensionError(QdapError, ValueError):
    """Raised when vector or matrix dimensions do not agree."""


class DegenerateDirectionError(QdapError):
    """Raised when the class means coincide and the LDA direction is undefined."""


class SingularCovarianceError(QdapError):
    """Raised when a covariance matrix cannot be factorized."""


class OptimizationError(QdapError):
    """Raised when no starting direction yields a finite objective."""


class ModelFormatError(QdapError, ValueError):
    """Raised when a serialized model file cannot be parsed."""
