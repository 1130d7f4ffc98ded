"""
Homotopy Module.

Curve families H(·, t), t ∈ [0, 1], together with a correspondence
P(·, t) from each slice back onto a fixed reference curve.

Two constructions are provided:

- coefficient interpolation between two Fourier curves, with P the
  identity onto the start curve;
- the two-step construction: loops are grown out of the reference curve β
  inside a thin normal tube until the normal projection back to β composes
  to a prescribed correspondence f, then points move straight to the
  target while P stays frozen at its stage-one value.
"""

from abc import ABC, abstractmethod
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, Optional, Tuple
import logging
import math

import numpy as np

from config.config import CONTINUATION_CONFIG
from curves.analysis import max_unsigned_curvature, tube_radius
from curves.base import ArrayLike
from curves.fourier import FourierCurve, PeriodicSeries
from size_metric.correspondence import ParamCorrespondence
from utils.errors import (
    DisplacementBudgetExceededError,
    IrregularHomotopyError,
    TubeTooSmallError,
)
from utils.helpers import smoothstep
from utils.validators import ValidationError

logger = logging.getLogger(__name__)


class HomotopyKind(str, Enum):
    FOURIER_LINEAR = "fourier_linear"
    TWO_STEP = "two_step"


class Homotopy(ABC):
    """
    Base class for curve homotopies.

    Attributes:
        start: Curve at t = 0
        end: Curve at t = 1
        reference: Curve that P(·, t) maps onto
        retries: Genericity retries used during construction
    """

    kind: HomotopyKind

    def __init__(self, start: FourierCurve, end: FourierCurve, reference: FourierCurve):
        self.start = start
        self.end = end
        self.reference = reference
        self.retries = 0
        self.curve_at = lru_cache(maxsize=256)(self._curve_at)

    @abstractmethod
    def _curve_at(self, t: float) -> FourierCurve:
        pass

    @abstractmethod
    def evaluate(self, s: ArrayLike, t: float) -> np.ndarray:
        """H(s, t)."""
        pass

    @abstractmethod
    def reference_params(self, s: ArrayLike, t: float) -> ArrayLike:
        """P(s, t): parameter on the reference curve (lifted, not wrapped)."""
        pass

    def correspondence_at(self, t: float, n: Optional[int] = None) -> ParamCorrespondence:
        """P(·, t) as a correspondence from the slice at ``t`` onto the reference."""
        n = n or CONTINUATION_CONFIG["correspondence_samples"]
        slice_curve = self.curve_at(t)
        return ParamCorrespondence(slice_curve, self.reference, self.reference_params(slice_curve.grid(n), t), "reference")

    def displacement(self, t: float, n: int = 256) -> float:
        """max_s |β(P(s, t)) − H(s, t)| on an ``n``-point grid."""
        s = self.start.grid(n)
        gap = self.reference.eval(self.reference_params(s, t)) - self.evaluate(s, t)
        return float(np.max(np.hypot(gap[:, 0], gap[:, 1])))

    def parameter_rates(self, n: int = 512) -> Tuple[float, float]:
        """Upper bounds on |∂P/∂s| and |∂P/∂t|."""
        return 1.0, 0.0

    def is_regular(self, grid=None) -> bool:
        """Regularity of every sampled slice on an (s, t) grid."""
        s_count, t_count = grid or CONTINUATION_CONFIG["regularity_grid"]
        for t in np.linspace(0.0, 1.0, t_count):
            curve = self.curve_at(float(t))
            speed = curve.speed(curve.grid(s_count))
            if np.min(speed) < curve.regularity_tolerance:
                logger.debug(f"Slice at t={t:.3f} is irregular (min speed {np.min(speed):.3e})")
                return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "start": self.start.to_dict(),
            "end": self.end.to_dict(),
            "retries": self.retries,
        }


class LinearHomotopy(Homotopy):
    """
    Coefficient interpolation (1 − t)·C0 + t·C1 + 4t(1 − t)·C_pert.
    """

    kind = HomotopyKind.FOURIER_LINEAR

    def __init__(self, start: FourierCurve, end: FourierCurve, perturbation: Optional[np.ndarray] = None):
        super().__init__(start, end, start)
        harmonics = max(start.harmonics, end.harmonics)
        if perturbation is not None:
            harmonics = max(harmonics, perturbation.shape[0] - 1)
        self._c0 = start.padded(harmonics).coefficients
        self._c1 = end.padded(harmonics).coefficients
        self.perturbation = np.zeros_like(self._c0)
        if perturbation is not None:
            self.perturbation[: perturbation.shape[0]] = perturbation

    def coefficients_at(self, t: float) -> np.ndarray:
        bump = 4.0 * t * (1.0 - t)
        return (1.0 - t) * self._c0 + t * self._c1 + bump * self.perturbation

    def _curve_at(self, t: float) -> FourierCurve:
        if t == 0.0:
            return self.start
        if t == 1.0:
            return self.end
        return FourierCurve(self.coefficients_at(t))

    def evaluate(self, s: ArrayLike, t: float) -> np.ndarray:
        return self.curve_at(t).eval(s)

    def reference_params(self, s: ArrayLike, t: float) -> ArrayLike:
        return np.asarray(s, dtype=float)


class TwoStepHomotopy(Homotopy):
    """
    Loop-extension homotopy from β to a target α.

    Stage 1 (τ = ramp(t / b)):   ψ = s + τ·φ(s),  H = β(ψ) + τ·e(s)·n_β(ψ),  P = ψ
    Stage 2 (σ = ramp((t − b)/(1 − b))):  H = (1 − σ)·γ(s) + σ·α(s),  P = s + φ(s)

    φ is a smooth fit of f − id, e the normal offset of α from β∘(id + φ)
    squashed into (−δ/2, δ/2), and γ the stage-one end curve.
    """

    kind = HomotopyKind.TWO_STEP

    def __init__(
        self,
        beta: FourierCurve,
        target: FourierCurve,
        f: ParamCorrespondence,
        delta: float,
        boundary: Optional[float] = None,
        harmonics: Optional[int] = None,
        wobble: Optional[np.ndarray] = None,
    ):
        super().__init__(beta, target, beta)
        if f.degree != 1:
            raise ValidationError(f"Correspondence must have degree 1, got {f.degree}")

        self.f = f
        self.delta = float(delta)
        self.eta: Optional[float] = None
        self.stage_boundary = CONTINUATION_CONFIG["stage_boundary"] if boundary is None else boundary
        if not 0.0 < self.stage_boundary < 1.0:
            raise ValidationError("Stage boundary must lie strictly between 0 and 1")

        corr_harmonics = CONTINUATION_CONFIG["correspondence_harmonics"]
        self.slice_harmonics = harmonics or max(
            CONTINUATION_CONFIG["slice_harmonics"], beta.harmonics, target.harmonics
        )
        samples = max(8 * self.slice_harmonics, 8 * corr_harmonics)
        grid = target.grid(samples)

        drift = f.lift_at(grid) - grid
        # Whole turns in the lift are a relabelling, not a displacement
        drift -= 2.0 * math.pi * round(float(np.mean(drift)) / (2.0 * math.pi))
        self.phi = PeriodicSeries.fit(drift, corr_harmonics)

        frozen = grid + self.phi(grid)
        offset = target.eval(grid) - beta.eval(frozen)
        normal_component = np.einsum("nd,nd->n", offset, self._normal(frozen))
        half = 0.5 * self.delta
        squashed = half * np.tanh(normal_component / half) if half > 0 else np.zeros_like(normal_component)
        if wobble is not None:
            squashed = squashed + wobble
        self.offset = PeriodicSeries.fit(squashed, corr_harmonics)

    @property
    def intermediate(self) -> FourierCurve:
        """The stage-one end curve γ."""
        return self.curve_at(self.stage_boundary)

    def _normal(self, u: ArrayLike) -> np.ndarray:
        tangent = self.reference.derivative(u, 1)
        length = np.hypot(tangent[..., 0], tangent[..., 1])[..., None]
        return np.stack([-tangent[..., 1], tangent[..., 0]], axis=-1) / length

    def _stage_one(self, s: np.ndarray, tau: float) -> np.ndarray:
        psi = s + tau * self.phi(s)
        return self.reference.eval(psi) + (tau * self.offset(s))[..., None] * self._normal(psi)

    def evaluate(self, s: ArrayLike, t: float) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        b = self.stage_boundary
        if t <= b:
            return self._stage_one(s, float(smoothstep(t / b)))
        sigma = float(smoothstep((t - b) / (1.0 - b)))
        return (1.0 - sigma) * self._stage_one(s, 1.0) + sigma * self.end.eval(s)

    def reference_params(self, s: ArrayLike, t: float) -> ArrayLike:
        s = np.asarray(s, dtype=float)
        b = self.stage_boundary
        tau = float(smoothstep(t / b)) if t <= b else 1.0
        return s + tau * self.phi(s)

    def parameter_rates(self, n: int = 512) -> Tuple[float, float]:
        s = self.start.grid(n)
        # max of the quintic ramp's slope is 15/8
        rate_t = float(np.max(np.abs(self.phi(s)))) * 1.875 / self.stage_boundary
        return 1.0 + float(np.max(np.abs(self.phi(s, 1)))), rate_t

    def _curve_at(self, t: float) -> FourierCurve:
        if t == 0.0:
            return self.start
        if t == 1.0:
            return self.end
        samples = 8 * self.slice_harmonics
        grid = self.start.grid(samples)
        return FourierCurve.from_samples(self.evaluate(grid, t), self.slice_harmonics)

    def to_dict(self) -> Dict[str, Any]:
        record = super().to_dict()
        record.update({"delta": self.delta, "eta": self.eta, "stage_boundary": self.stage_boundary, "f": self.f.to_dict()})
        return record


def build_linear_homotopy(
    start: FourierCurve,
    target: FourierCurve,
    seed: int = 0,
    retries: Optional[int] = None,
) -> LinearHomotopy:
    """
    Coefficient-interpolation homotopy with genericity retries.

    Args:
        start: Curve at t = 0
        target: Curve at t = 1
        seed: Seed for mid-path perturbations
        retries: Perturbation attempts (default 5)

    Returns:
        LinearHomotopy whose sampled slices are all regular

    Raises:
        IrregularHomotopyError: If every attempt has an irregular slice
    """
    if not (start.is_regular() and target.is_regular()):
        raise ValidationError("Homotopy endpoints must be regular curves")

    homotopy = LinearHomotopy(start, target)
    if homotopy.is_regular():
        return homotopy

    retries = CONTINUATION_CONFIG["retries"] if retries is None else retries
    rng = np.random.default_rng(seed)
    radius = 0.5 * (start.total_length + target.total_length) / (2.0 * math.pi)
    shape = homotopy.perturbation.shape

    for attempt in range(1, retries + 1):
        perturbation = rng.uniform(-1.0, 1.0, size=shape) * CONTINUATION_CONFIG["perturbation_scale"] * radius
        perturbation[0] = 0.0
        logger.warning(f"Irregular interpolation; retrying with a mid-path perturbation (attempt {attempt})")
        homotopy = LinearHomotopy(start, target, perturbation)
        if homotopy.is_regular():
            homotopy.retries = attempt
            return homotopy

    raise IrregularHomotopyError(f"Homotopy still irregular after {retries} perturbations")


def build_two_step_homotopy(
    beta: FourierCurve,
    target: FourierCurve,
    f: ParamCorrespondence,
    eta: Optional[float] = None,
    delta_margin: Optional[float] = None,
    seed: int = 0,
    retries: Optional[int] = None,
) -> TwoStepHomotopy:
    """
    Two-step homotopy from ``beta`` to ``target``.

    Args:
        beta: Reference curve (t = 0)
        target: Target curve (t = 1)
        f: Correspondence from ``target`` onto ``beta``
        eta: Displacement budget (default 1/(10 κ_max(beta)))
        delta_margin: Tube width δ (default (η − displacement)/2)
        seed: Seed for genericity retries
        retries: Retry attempts

    Returns:
        TwoStepHomotopy with |β(P) − H| < η on the sample grid

    Raises:
        DisplacementBudgetExceededError: If f (or the built homotopy)
            displaces points by η or more
        TubeTooSmallError: If beta has no embedded tube of radius δ
        IrregularHomotopyError: If no regular realisation is found
    """
    kappa = max_unsigned_curvature(beta)
    eta = 1.0 / (10.0 * kappa) if eta is None else eta
    displacement = f.max_displacement

    if displacement >= eta:
        raise DisplacementBudgetExceededError(f"Correspondence displacement {displacement:.6g} ≥ η = {eta:.6g}")

    delta = 0.5 * (eta - displacement) if delta_margin is None else delta_margin
    if displacement >= eta - delta:
        raise DisplacementBudgetExceededError(
            f"Correspondence displacement {displacement:.6g} ≥ η − δ = {eta - delta:.6g}"
        )

    reach = tube_radius(beta)
    if reach < delta:
        raise TubeTooSmallError(f"Tube radius {reach:.6g} of the reference curve is below δ = {delta:.6g}")

    retries = CONTINUATION_CONFIG["retries"] if retries is None else retries
    rng = np.random.default_rng(seed)
    wobble = None
    s_count, t_count = CONTINUATION_CONFIG["regularity_grid"]

    for attempt in range(retries + 1):
        homotopy = TwoStepHomotopy(beta, target, f, delta, wobble=wobble)
        homotopy.eta = eta

        worst = max(homotopy.displacement(float(t), s_count) for t in np.linspace(0.0, 1.0, t_count))
        if worst >= eta:
            raise DisplacementBudgetExceededError(f"Homotopy displacement {worst:.6g} ≥ η = {eta:.6g}")

        if homotopy.is_regular():
            homotopy.retries = attempt
            logger.info(f"Two-step homotopy built: η={eta:.4g}, δ={delta:.4g}, max displacement {worst:.4g}")
            return homotopy

        logger.warning(f"Irregular two-step slice; perturbing the loop offsets (attempt {attempt + 1})")
        samples = max(8 * homotopy.slice_harmonics, 8 * CONTINUATION_CONFIG["correspondence_harmonics"])
        wobble = rng.uniform(-1.0, 1.0, size=samples) * 0.05 * delta

    raise IrregularHomotopyError(f"Two-step homotopy still irregular after {retries} perturbations")
