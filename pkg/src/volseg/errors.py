"""Exception types shared across the package."""


class VolsegError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(VolsegError, ValueError):
    """Raised for malformed inputs (non-finite data, wrong shapes, bad flags)."""


class ParameterError(VolsegError, ValueError):
    """Raised when model or distribution parameters violate their constraints."""


class DegenerateDataError(VolsegError, ValueError):
    """Raised when data is too degenerate to work with (e.g. all-identical values)."""


class ConfigError(VolsegError, ValueError):
    """Raised for inconsistent study / segmentation / CLI configuration."""


class IngestionError(VolsegError, ValueError):
    """Raised when a price file cannot be parsed into a valid series."""
