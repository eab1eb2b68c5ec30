"""Exception types shared across the package."""


class QSubspaceError(ValueError):
    """Base class for all errors raised by qsubspace."""


class DimensionError(QSubspaceError):
    """Vector or product-space dimensions are incompatible or too large."""


class QuantizationError(QSubspaceError):
    pass


class ModelError(QSubspaceError):
    """A classifier cannot be fitted or used as requested."""


class DatasetError(QSubspaceError):
    """Malformed dataset input. ``lineno`` is 1-based when known."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
