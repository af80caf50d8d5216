"""Exception types shared across the package."""


class MultiportError(Exception):
    """Base class for all errors raised by :mod:`multiport`."""


class InvalidArgument(MultiportError, ValueError):
    """An input violates the documented preconditions."""


class ConsistencyError(MultiportError):
    """A matrix that must be orthogonal is not (within tolerance)."""


class NotRepresentable(MultiportError):
    """A gate output does not map back onto the two-photon occupation basis."""


class UnsupportedSize(MultiportError, ValueError):
    """Matrix or photon number exceeds what the simulator supports."""
