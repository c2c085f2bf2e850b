"""
Custom exceptions for the imaging toolkit
"""


class ImagingError(Exception):
    """Base exception for all imaging-related errors"""
    pass


class InvalidArgumentError(ImagingError, ValueError):
    """Exception for arguments outside an operation's contract"""
    pass


class DomainError(ImagingError, ValueError):
    """Exception for curve parameters outside the parameter domain"""
    pass


class InvalidGeometryError(ImagingError):
    """Exception for degenerate or unusable scene geometry"""
    pass


class NumericalError(ImagingError):
    """Exception for numerical failures (non-finite data, failed solves)"""
    pass


class DegenerateSubspaceError(NumericalError):
    """Exception raised when the noise subspace is empty"""
    pass


class ConfigurationError(ImagingError):
    """Exception for configuration-related errors"""
    pass


class SceneParseError(ConfigurationError):
    """Exception for malformed scene documents"""

    def __init__(self, message: str, key: str = None):
        self.key = key
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)


class ExportError(ImagingError):
    """Exception for map export failures"""
    pass
