"""Exception hierarchy.

Each class maps onto one CLI exit code (see ``majorana_probe.cli``).
"""

from __future__ import annotations


class MajoranaProbeError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(MajoranaProbeError, ValueError):
    """Invalid model parameters, grids, sweep specs or configuration."""


class SolverError(MajoranaProbeError, ArithmeticError):
    """A numerical solve failed (no admissible root, singular system, ...)."""

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class SingularityError(SolverError):
    """A denominator or linear system vanished where it should not."""


class DifferentiationError(SolverError):
    """Richardson extrapolation did not converge."""


class IntegrationError(SolverError):
    """Time-domain integration broke down (step underflow, NaN state)."""


class FeatureError(MajoranaProbeError):
    """A spectrum did not contain the features requested from it."""
