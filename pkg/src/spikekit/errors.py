"""Exception hierarchy shared by every spikekit module.

All library errors derive from SpikeKitError so callers can branch on one
base class; the subclasses mirror the three failure families (bad values,
mismatched shapes, malformed containers).
"""


class SpikeKitError(Exception):
    """Base class for all spikekit errors."""


class DomainError(SpikeKitError, ValueError):
    """A value is outside its permitted domain (negative intensity,
    threshold <= 0, ratio outside [0, 1], ...)."""


class DimensionError(SpikeKitError, ValueError):
    """Array shapes or pixel dimensions do not match the operation."""


class FormatError(SpikeKitError, ValueError):
    """A serialized container or image file violates its format."""


class BadMagicError(FormatError):
    """The leading magic bytes do not identify a known format."""


class UnsupportedVersionError(FormatError):
    """The container version is not handled by this library."""


class TruncatedError(FormatError):
    """The payload is shorter than the header declares."""


class DirtyPaddingError(FormatError):
    """Padding bits that must be zero are set (strict loading only)."""
