"""
Errors Module.

This module defines the numerical failure hierarchy shared by the curve,
square, size and continuation packages.
"""

from typing import Any, Optional


class NumericalError(Exception):
    """Base class for numerical failures."""
    pass


class DegenerateSpeedError(NumericalError):
    """Raised when |γ′| falls below the regularity tolerance."""
    pass


class LiftAmbiguityError(NumericalError):
    """Raised when a successive lift gap reaches π."""
    pass


class PerturbationRejectedError(NumericalError):
    """Raised when a perturbed curve fails its regularity or simplicity check."""
    pass


class RefinementError(NumericalError):
    """Base class for square refinement failures."""

    def __init__(self, message: str, params: Any = None, residual_norm: float = float("nan")):
        super().__init__(message)
        self.params = params
        self.residual_norm = residual_norm


class NonConvergenceError(RefinementError):
    """Refinement ran out of iterations."""
    pass


class DegenerateJacobianError(RefinementError):
    """Refinement hit an ill-conditioned Jacobian away from a solution."""
    pass


class IrregularHomotopyError(NumericalError):
    """Raised when a homotopy stays irregular after all genericity retries."""
    pass


class TubeTooSmallError(NumericalError):
    """Raised when the reference curve has no embedded tube of the requested radius."""
    pass


class DisplacementBudgetExceededError(NumericalError):
    """Raised when a correspondence displaces points by more than the budget η allows."""
    pass


class PathLostError(NumericalError):
    """Raised when continuation steps shrink below the floor."""

    def __init__(self, message: str, last_state: Optional[Any] = None):
        super().__init__(message)
        self.last_state = last_state


class ProjectionAmbiguityError(NumericalError):
    """Raised when a nearest-point projection is not single valued."""
    pass


class GenerationFailedError(NumericalError):
    """Raised when a scenario generator produces a curve that fails its checks."""
    pass
