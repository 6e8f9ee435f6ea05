"""Exception types raised by EnergyStudio."""

from typing import Any


class EnergyStudioError(Exception):
    """Base class for every error raised by the package."""


class InvalidProfileError(EnergyStudioError, ValueError):
    """A curvature profile is non-positive, malformed or evaluated outside its table."""


class PreconditionError(EnergyStudioError, ValueError):
    """An operation was called outside its documented preconditions."""


class ParameterError(EnergyStudioError, ValueError):
    """A model parameter (q, λ, curvature) lies outside the admissible region."""


class UnsupportedManifoldError(EnergyStudioError, ValueError):
    """The operation needs exact geometry but the manifold only carries bounds."""


class IntegratorFailureError(EnergyStudioError, RuntimeError):
    """A numerical solver failed: the ODE integrator stalled or a root could not be bracketed."""


class ConfigError(EnergyStudioError, ValueError):
    """A run configuration is invalid or cannot be read."""


class GrowthConditionRefusal(EnergyStudioError, RuntimeError):
    """
    The interaction potential is outside the existence regime.

    Args:
        message (str): Human readable reason.
        theorem (str): Name of the result that rules the computation out.
        report (Any): The growth classification report backing the refusal.
    """

    def __init__(self, message: str, theorem: str, report: Any = None):
        super().__init__(message)
        self.theorem = theorem
        self.report = report
