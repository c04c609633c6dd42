"""Exception types shared across the package."""


class DomainError(ValueError):
    """Raised when inputs are well-formed but mathematically invalid."""


class RecoveryError(DomainError):
    """Raised when a profile cannot be read back from a module."""
