"""Exception types shared across the toolkit."""


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


class SingularGeometryError(ValueError):
    """A search or target point coincides with a platform position."""


class DimensionError(ValueError):
    """An array argument has the wrong shape or length."""


class DomainError(ValueError):
    """A point or segment lies outside the sampled field domain."""


class WindowTooSmallError(RuntimeError):
    """A sampled profile never crosses the requested level."""


class NumericalError(RuntimeError):
    """A numerical consistency check failed; context is in the message."""
