"""Shared exception types.

ConfigError maps to CLI exit code 2, NumericsError to exit code 3.
"""


class ConfigError(ValueError):
    """Invalid or inconsistent user-facing configuration."""


class NumericsError(RuntimeError):
    """A numerical routine failed to converge or went unstable."""


class NoDipError(NumericsError):
    """A density profile has no central dip to measure."""


class InstabilityError(NumericsError):
    """Time integration detected unphysical norm growth."""
