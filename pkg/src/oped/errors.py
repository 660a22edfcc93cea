"""Exception types shared across the package."""


class OPEDError(ValueError):
    """Base class for all errors raised by :mod:`oped`."""


class InvalidParameterError(OPEDError):
    """An integer resolution, index or rule parameter is out of range."""


class DomainError(OPEDError):
    """A point or offset lies outside the domain of the operation."""


class FormatError(OPEDError):
    """A phantom, sinogram or table file could not be parsed."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
