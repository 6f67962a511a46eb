"""Exception types raised across the package."""


class GeometryError(ValueError):
    """Invalid geometric input: empty point sets, dimension mismatches,
    out-of-range parameters."""


class NumericalError(ArithmeticError):
    """A numerical procedure failed its own accuracy check."""


class ConfigError(ValueError):
    """Unknown experiment or malformed run configuration."""
