"""Exception types shared across the package."""

from __future__ import annotations


class ExcsimError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(ExcsimError):
    """Invalid parameters, config files, or API usage (exit status 1)."""


class SimulationError(ExcsimError):
    """Numerical failure or a run that never reached its expected state (exit status 2)."""
