"""
Square Tracker Module.

Follows an inscribed square through a homotopy by pseudo-arclength
continuation on the extended unknown x = (s1, s2, s3, s4, t). Traces end
when t reaches the far endpoint, at a fold of the solution curve, or when
the square shrinks to a point.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple
import logging

import numpy as np
import pandas as pd

from config.config import CONTINUATION_CONFIG
from continuation.homotopy import Homotopy
from squares.candidate import SquareCandidate
from squares.refine import newton_refine
from squares.residual import square_jacobian, square_residual
from size_metric.oriented_length import square_size
from utils.errors import PathLostError, RefinementError
from utils.helpers import wrap_difference
from utils.validators import OrientationError, ValidationError

logger = logging.getLogger(__name__)


class TraceEvent(str, Enum):
    """How a trace starts or ends."""

    REACHED_T0 = "reached_t0"
    REACHED_T1 = "reached_t1"
    FOLD_MERGE = "fold_merge"
    FOLD_SPLIT = "fold_split"
    ZERO_SQUARE_BIRTH = "zero_square_birth"
    ZERO_SQUARE_DEATH = "zero_square_death"
    INTERIOR_START = "interior_start"


@dataclass
class TraceSample:
    t: float
    square: SquareCandidate
    size_wrt_p: float

    def to_dict(self) -> Dict[str, Any]:
        return {"t": self.t, "size_wrt_p": self.size_wrt_p, "square": self.square.to_dict()}


@dataclass
class ContinuationTrace:
    """
    Samples of one tracked square, ordered by tracking direction.

    Attributes:
        samples: Accepted continuation points
        start_event: How the trace begins (at its first sample)
        end_event: How the trace ends (at its last sample)
        direction: +1 when tracked forward in t, −1 backward
        fold_partner: Square on the sibling branch just past a fold
        fold_t: Time of the fold
        rejected_steps: Steps rejected by the corrector or the continuity check
        rank_deficient_steps: Accepted steps whose extended Jacobian lost rank
    """

    samples: List[TraceSample]
    start_event: TraceEvent
    end_event: TraceEvent
    direction: int = 1
    fold_partner: Optional[SquareCandidate] = None
    fold_t: Optional[float] = None
    rejected_steps: int = 0
    rank_deficient_steps: int = 0

    @property
    def initial(self) -> TraceSample:
        return self.samples[0]

    @property
    def final(self) -> TraceSample:
        return self.samples[-1]

    @property
    def times(self) -> np.ndarray:
        return np.array([sample.t for sample in self.samples])

    @property
    def sizes(self) -> np.ndarray:
        return np.array([sample.size_wrt_p for sample in self.samples])

    @property
    def sidelengths(self) -> np.ndarray:
        return np.array([sample.square.sidelength for sample in self.samples])

    def is_monotone(self) -> bool:
        steps = np.diff(self.times) * self.direction
        return bool(np.all(steps > 0))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t": self.times,
            "size_wrt_p": self.sizes,
            "sidelength": self.sidelengths,
            "residual_norm": [sample.square.residual_norm for sample in self.samples],
        })

    def to_dict(self) -> Dict[str, Any]:
        return {
            "start_event": self.start_event.value,
            "end_event": self.end_event.value,
            "direction": self.direction,
            "fold_t": self.fold_t,
            "fold_partner": self.fold_partner.to_dict() if self.fold_partner is not None else None,
            "rejected_steps": self.rejected_steps,
            "rank_deficient_steps": self.rank_deficient_steps,
            "samples": [sample.to_dict() for sample in self.samples],
        }


@dataclass
class StepControl:
    """
    Adaptive step settings.

    Attributes:
        initial_step: First pseudo-arclength step
        max_step: Step ceiling
        min_step: Step floor; shrinking below it loses the path
        corrector_tol: Residual tolerance (default factor × reference length)
        corrector_max_iter: Corrector iteration cap
        max_steps: Accepted-step cap
        zero_factor: Zero-square threshold as a fraction of total length
        continuity_slack: Additive slack of the size continuity budget
        fd_step: Time step of the finite-difference ∂F/∂t
    """

    initial_step: float = CONTINUATION_CONFIG["initial_step"]
    max_step: float = CONTINUATION_CONFIG["max_step"]
    min_step: float = CONTINUATION_CONFIG["step_floor"]
    corrector_tol: Optional[float] = None
    corrector_max_iter: int = CONTINUATION_CONFIG["corrector_max_iter"]
    max_steps: int = CONTINUATION_CONFIG["max_steps"]
    zero_factor: float = CONTINUATION_CONFIG["zero_square_factor"]
    continuity_slack: float = CONTINUATION_CONFIG["continuity_slack"]
    fd_step: float = CONTINUATION_CONFIG["fd_step"]

    @classmethod
    def from_config(cls, **overrides) -> "StepControl":
        return cls(**{key: value for key, value in overrides.items() if value is not None})


class _PathSystem:
    """Residual, extended Jacobian and sizes of one homotopy."""

    def __init__(self, homotopy: Homotopy, control: StepControl):
        self.homotopy = homotopy
        self.control = control
        reference = homotopy.reference
        self.scale = reference.total_length
        self.tol = control.corrector_tol or CONTINUATION_CONFIG["corrector_tol_factor"] * self.scale
        self.zero_threshold = control.zero_factor * self.scale

        speeds = [homotopy.curve_at(float(t)).speed(reference.grid(256)).max() for t in (0.0, 0.5, 1.0)]
        self.speed_bound = 1.05 * max(float(np.max(reference.speed(reference.grid(512)))), *speeds)
        self.rate_s, self.rate_t = homotopy.parameter_rates()

    def residual(self, x: np.ndarray) -> np.ndarray:
        return square_residual(self.homotopy.curve_at(float(x[4])), x[:4])

    def time_derivative(self, x: np.ndarray) -> np.ndarray:
        t = float(x[4])
        eps = self.control.fd_step
        lo, hi = max(0.0, t - eps), min(1.0, t + eps)
        s = x[:4]
        upper = square_residual(self.homotopy.curve_at(hi), s)
        lower = square_residual(self.homotopy.curve_at(lo), s)
        return (upper - lower) / (hi - lo)

    def extended_jacobian(self, x: np.ndarray) -> np.ndarray:
        jacobian = square_jacobian(self.homotopy.curve_at(float(x[4])), x[:4])
        return np.column_stack([jacobian, self.time_derivative(x)])

    def tangent(self, x: np.ndarray, previous: Optional[np.ndarray] = None) -> Tuple[np.ndarray, bool]:
        """Unit null vector of the extended Jacobian, oriented along ``previous``."""
        _, singular, vt = np.linalg.svd(self.extended_jacobian(x))
        vector = vt[-1]
        if previous is not None and float(vector @ previous) < 0:
            vector = -vector
        deficient = bool(singular[-1] <= 1e-10 * singular[0])
        return vector, deficient

    def correct(self, predicted: np.ndarray, tangent: np.ndarray) -> Optional[np.ndarray]:
        """Newton on F(x) = 0 constrained to the hyperplane through ``predicted`` normal to ``tangent``."""
        x = predicted.copy()
        for _ in range(self.control.corrector_max_iter):
            residual = self.residual(x)
            constraint = float(tangent @ (x - predicted))
            if np.linalg.norm(residual) <= self.tol and abs(constraint) <= self.tol:
                return x
            system = np.vstack([self.extended_jacobian(x), tangent])
            try:
                step = np.linalg.solve(system, -np.append(residual, constraint))
            except np.linalg.LinAlgError:
                return None
            x = x + step
            if not np.all(np.isfinite(x)):
                return None
        if np.linalg.norm(self.residual(x)) <= self.tol:
            return x
        return None

    def sample(self, x: np.ndarray) -> TraceSample:
        t = float(x[4])
        curve = self.homotopy.curve_at(t)
        candidate = SquareCandidate.from_params(curve, x[:4])
        try:
            size = square_size(candidate, self.homotopy.reference, self.homotopy.correspondence_at(t))
        except OrientationError:
            logger.debug(f"Square at t={t:.6f} has reflected labels; size recorded as nan")
            size = float("nan")
        return TraceSample(t, candidate, size)

    def size_budget(self, x_old: np.ndarray, x_new: np.ndarray) -> float:
        """Largest size jump the step may produce."""
        move = self.rate_s * float(np.max(np.abs(x_new[:4] - x_old[:4]))) + self.rate_t * abs(x_new[4] - x_old[4])
        return 8.0 * self.speed_bound * move + self.control.continuity_slack


def _unwrapped(candidate: SquareCandidate, near: np.ndarray) -> np.ndarray:
    """Parameters of ``candidate`` lifted next to ``near``."""
    return near + wrap_difference(candidate.params - np.mod(near, 2.0 * np.pi))


def track_square(
    h: Homotopy,
    square0: SquareCandidate,
    step: Optional[StepControl] = None,
    t0: float = 0.0,
    direction: int = 1,
) -> ContinuationTrace:
    """
    Track an inscribed square of H(·, t0) through the homotopy.

    Args:
        h: Homotopy
        square0: Square solving the residual system of H(·, t0)
        step: Step control (defaults from CONTINUATION_CONFIG)
        t0: Start time
        direction: +1 to move toward t = 1, −1 toward t = 0

    Returns:
        ContinuationTrace with classified start and end events

    Raises:
        PathLostError: If the step shrinks below the floor; ``last_state``
            holds the trace up to the last accepted sample
    """
    if direction not in (1, -1):
        raise ValidationError("Direction must be +1 or -1")
    if not 0.0 <= t0 <= 1.0:
        raise ValidationError(f"Start time {t0} outside [0, 1]")

    control = step or StepControl()
    system = _PathSystem(h, control)
    goal = 1.0 if direction > 0 else 0.0

    x = np.append(np.asarray(square0.params, dtype=float), t0)
    start_residual = float(np.linalg.norm(system.residual(x)))
    if start_residual > 1e3 * system.tol:
        raise ValidationError(f"Start square has residual {start_residual:.3e} at t={t0}")

    if t0 == 0.0:
        start_event = TraceEvent.REACHED_T0
    elif t0 == 1.0:
        start_event = TraceEvent.REACHED_T1
    elif square0.sidelength <= system.zero_threshold:
        start_event = TraceEvent.ZERO_SQUARE_BIRTH if direction > 0 else TraceEvent.ZERO_SQUARE_DEATH
    else:
        start_event = TraceEvent.INTERIOR_START

    tangent, _ = system.tangent(x)
    if abs(tangent[4]) < 1e-12:
        logger.warning(f"Start square at t={t0} sits on a fold; tracking along the arbitrary branch")
    if tangent[4] * direction < 0:
        tangent = -tangent

    trace = ContinuationTrace([system.sample(x)], start_event, start_event, direction)
    length = control.initial_step

    def lose(message: str) -> PathLostError:
        logger.warning(message)
        return PathLostError(message, last_state=trace)

    for _ in range(control.max_steps):
        # Endgame: the predictor would cross the goal time
        predicted = x + length * tangent
        if tangent[4] * direction > 0 and (predicted[4] - goal) * direction >= 0:
            scale = (goal - x[4]) / tangent[4]
            guess = x[:4] + scale * tangent[:4]
            try:
                landed = newton_refine(h.curve_at(goal), guess, tol=system.tol)
                params = _unwrapped(landed, guess)
                if np.max(np.abs(params - guess)) > max(abs(scale), 1e-8):
                    raise RefinementError("Endpoint landing jumped to another square", params, landed.residual_norm)
            except RefinementError as exc:
                logger.debug(f"Endpoint landing failed: {exc}")
                length = 0.5 * min(length, abs(scale))
                trace.rejected_steps += 1
                if length < control.min_step:
                    raise lose(f"Path lost approaching t={goal} (step {length:.2e})")
                continue
            x = np.append(params, goal)
            trace.samples.append(system.sample(x))
            trace.end_event = TraceEvent.REACHED_T1 if direction > 0 else TraceEvent.REACHED_T0
            logger.debug(f"Trace reached t={goal} after {len(trace.samples)} samples")
            return trace

        corrected = system.correct(predicted, tangent)
        if corrected is None or not (-1e-9 <= corrected[4] <= 1.0 + 1e-9):
            length *= 0.5
            trace.rejected_steps += 1
            if length < control.min_step:
                raise lose(f"Path lost at t={x[4]:.6f}: corrector failed down to step {length:.2e}")
            continue

        sample = system.sample(corrected)
        previous = trace.final.size_wrt_p
        if np.isfinite(previous) and np.isfinite(sample.size_wrt_p):
            if abs(sample.size_wrt_p - previous) > system.size_budget(x, corrected):
                length *= 0.5
                trace.rejected_steps += 1
                if length < control.min_step:
                    raise lose(f"Path lost at t={x[4]:.6f}: size jumps persist down to step {length:.2e}")
                continue

        new_tangent, deficient = system.tangent(corrected, tangent)
        if deficient:
            trace.rank_deficient_steps += 1
            if trace.rank_deficient_steps == 3:
                logger.warning(f"Extended Jacobian rank deficient along the trace near t={corrected[4]:.6f}")

        moving = corrected[4] - x[4]
        if new_tangent[4] * tangent[4] < 0:
            # Fold: t turns around; the square meets its sibling branch
            merging = tangent[4] > 0
            event = TraceEvent.FOLD_MERGE if merging else TraceEvent.FOLD_SPLIT
            if moving * direction > 0:
                trace.samples.append(sample)
                beyond = system.correct(corrected + length * new_tangent, new_tangent)
                partner = system.sample(beyond).square if beyond is not None else None
            else:
                partner = sample.square
            trace.end_event = event
            trace.fold_t = float(corrected[4])
            trace.fold_partner = partner
            logger.info(f"Fold ({event.value}) at t={trace.fold_t:.6f}")
            return trace

        if moving * direction <= 0:
            length *= 0.5
            trace.rejected_steps += 1
            if length < control.min_step:
                raise lose(f"Path lost at t={x[4]:.6f}: no progress in t")
            continue

        trace.samples.append(sample)
        x, tangent = corrected, new_tangent

        if sample.square.sidelength <= system.zero_threshold:
            event = TraceEvent.ZERO_SQUARE_DEATH if direction > 0 else TraceEvent.ZERO_SQUARE_BIRTH
            trace.end_event = event
            logger.info(f"Square shrank to a point ({event.value}) at t={x[4]:.6f}")
            return trace

        length = min(1.5 * length, control.max_step)

    raise lose(f"Step cap {control.max_steps} reached at t={x[4]:.6f}")
