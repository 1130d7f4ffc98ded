"""
Parameter correspondences between closed curves.

A correspondence samples a circle map s ↦ target parameter on a uniform
source grid, stores its continuous lift, and interpolates linearly in the
lift between grid nodes.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional
import logging

import numpy as np

from config.config import SIZE_CONFIG
from curves.base import ArrayLike, BaseCurve
from curves.projection import project_points
from curves.winding import lift_samples
from utils.errors import ProjectionAmbiguityError
from utils.helpers import TWO_PI, wrap_difference
from utils.validators import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ParamCorrespondence:
    """
    Sampled correspondence from ``source_curve`` to ``target_curve``.

    Attributes:
        source_curve: Curve whose parameters are the inputs
        target_curve: Curve whose parameters are the outputs
        target_params: Target parameter at each source grid node
        target_curve_ref: Identifier of the target curve
        source_params: Uniform source grid (derived)
        lift: Continuous lift of ``target_params`` (derived)
        degree: Degree of the sampled circle map (derived)
        max_displacement: max |source point − target point| over the grid (derived)
    """

    source_curve: BaseCurve = field(repr=False)
    target_curve: BaseCurve = field(repr=False)
    target_params: np.ndarray = field(repr=False)
    target_curve_ref: str = "target"
    source_params: np.ndarray = field(init=False, repr=False)
    lift: np.ndarray = field(init=False, repr=False)
    degree: int = field(init=False)
    max_displacement: float = field(init=False)

    def __post_init__(self):
        targets = np.mod(np.asarray(self.target_params, dtype=float), TWO_PI)
        if targets.ndim != 1 or targets.size < 4 or not np.all(np.isfinite(targets)):
            raise ValidationError("Correspondence needs at least 4 finite target parameters")

        n = targets.size
        source = np.arange(n) * (TWO_PI / n)
        lifted = lift_samples(targets)
        closing = wrap_difference(targets[0] - targets[-1])
        degree = int(round((lifted[-1] + closing - lifted[0]) / TWO_PI))
        # The closing gap must be unambiguous too
        lift_samples(np.array([targets[-1], targets[0]]))

        displacement = self.source_curve.eval(source) - self.target_curve.eval(targets)
        max_displacement = float(np.max(np.hypot(displacement[:, 0], displacement[:, 1])))

        for name, value in (("target_params", targets), ("source_params", source), ("lift", lifted)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "max_displacement", max_displacement)

    @property
    def sample_count(self) -> int:
        return self.target_params.size

    def lift_at(self, s: ArrayLike) -> ArrayLike:
        """
        Lifted image of real source parameters, linear between grid nodes and
        equivariant under s ↦ s + 2π (shifts by 2π·degree).
        """
        s_arr = np.asarray(s, dtype=float)
        n = self.sample_count
        h = TWO_PI / n
        turns = np.floor(s_arr / TWO_PI)
        position = (s_arr - turns * TWO_PI) / h
        index = np.clip(np.floor(position).astype(int), 0, n - 1)
        fraction = position - index

        following = np.append(self.lift[1:], self.lift[0] + TWO_PI * self.degree)
        value = self.lift[index] + fraction * (following[index] - self.lift[index])
        return value + TWO_PI * self.degree * turns

    def evaluate(self, s: ArrayLike) -> ArrayLike:
        """Target parameter in [0, 2π) for source parameter ``s``."""
        return np.mod(self.lift_at(s), TWO_PI)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target_curve_ref": self.target_curve_ref,
            "sample_count": self.sample_count,
            "degree": self.degree,
            "max_displacement": self.max_displacement,
        }

    @classmethod
    def identity(cls, curve: BaseCurve, n: Optional[int] = None, ref: str = "identity") -> "ParamCorrespondence":
        """The identity map of a curve's parameter circle."""
        n = n or SIZE_CONFIG["correspondence_samples"]
        return cls(curve, curve, curve.grid(n), ref)

    @classmethod
    def from_arrays(
        cls,
        source_curve: BaseCurve,
        target_curve: BaseCurve,
        target_params: np.ndarray,
        ref: str = "target",
    ) -> "ParamCorrespondence":
        return cls(source_curve, target_curve, np.asarray(target_params, dtype=float), ref)

    @classmethod
    def from_mapping(
        cls,
        source_curve: BaseCurve,
        target_curve: BaseCurve,
        mapping: Callable[[np.ndarray], np.ndarray],
        n: Optional[int] = None,
        ref: str = "target",
    ) -> "ParamCorrespondence":
        """
        Sample a parameter map, doubling the grid until linear interpolation
        of the lift reproduces the map at the new midpoints to 1e-8 relative.

        Args:
            source_curve: Source curve
            target_curve: Target curve
            mapping: Vectorised map from source to target parameters
            n: Initial grid (default 256)
            ref: Target identifier

        Returns:
            ParamCorrespondence
        """
        n = n or SIZE_CONFIG["arc_samples"]
        limit = SIZE_CONFIG["max_samples"]
        tolerance = SIZE_CONFIG["lift_rel_tol"] * TWO_PI

        corr = cls(source_curve, target_curve, mapping(source_curve.grid(n)), ref)
        while 2 * n <= limit:
            midpoints = source_curve.grid(n) + np.pi / n
            exact = np.asarray(mapping(midpoints), dtype=float)
            error = np.max(np.abs(wrap_difference(exact - corr.evaluate(midpoints))))
            if error < tolerance:
                break
            n *= 2
            corr = cls(source_curve, target_curve, mapping(source_curve.grid(n)), ref)
        else:
            logger.debug(f"Correspondence sampling capped at {n} nodes")
        return corr

    @classmethod
    def from_projection(
        cls,
        source_curve: BaseCurve,
        target_curve: BaseCurve,
        n: Optional[int] = None,
        ref: str = "target",
        strict: bool = True,
    ) -> "ParamCorrespondence":
        """
        Correspondence by nearest-point projection of the source curve onto
        the target.

        Raises:
            ProjectionAmbiguityError: If ``strict`` and any projection is ambiguous
        """
        n = n or SIZE_CONFIG["correspondence_samples"]
        batch = project_points(target_curve, source_curve.eval(source_curve.grid(n)))
        if np.any(batch.ambiguous):
            message = f"{int(np.sum(batch.ambiguous))} of {n} projections are ambiguous"
            if strict:
                raise ProjectionAmbiguityError(message)
            logger.warning(message)
        return cls(source_curve, target_curve, batch.params, ref)
