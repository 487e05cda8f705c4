"""Exception types raised across the package."""


class FingerspellError(Exception):
    """Base class for all package-specific errors."""


class UniformImageError(FingerspellError):
    """All pixels share one intensity; no threshold can split the histogram."""


class NoContourError(FingerspellError):
    """A contour was required but none is available."""


class DegenerateContourError(FingerspellError):
    """Contour has too few points or encloses no area."""


class DegeneratePointsError(FingerspellError):
    """Coincident points where distinct ones are required."""


class NoPointsError(FingerspellError):
    """An operation on a point set received no points."""


class DecodeError(FingerspellError):
    """Base class for image decoding failures."""


class MalformedHeaderError(DecodeError):
    """Image header is missing, corrupt, or of an unsupported variant."""


class TruncatedDataError(DecodeError):
    """Pixel data ends before the header-declared size."""


class UnsupportedMaxvalError(DecodeError):
    """Graymap maxval exceeds the 8-bit range this package handles."""


class UnsupportedPngError(DecodeError):
    """PNG feature outside the supported subset (interlacing, >8-bit)."""


class ConfigError(FingerspellError):
    """Base class for configuration file problems."""


class UnknownKeyError(ConfigError):
    """Configuration key is not recognized."""


class TypeMismatchError(ConfigError):
    """Configuration value cannot be parsed as the key's type."""


class RangeViolationError(ConfigError):
    """Configuration value parsed but falls outside its legal range."""
