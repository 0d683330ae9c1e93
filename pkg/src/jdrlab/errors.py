"""Workbench exception types, mapped to CLI exit codes."""


class ConfigError(Exception):
    """Invalid or inconsistent configuration (CLI exit code 2)."""


class NumericalError(Exception):
    """Numerical-stability failure in the simulator (CLI exit code 3)."""
