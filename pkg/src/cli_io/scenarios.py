"""
Scenario generators.

A ScenarioSpec names a curve family and its parameters; ``generate``
writes the resulting curve files. Every random choice is drawn from the
spec's seed, so identical specs produce identical files.
"""

from enum import Enum
from pathlib import Path
from typing import List, Tuple
import logging

import numpy as np
from pydantic import BaseModel, Field, model_validator

from curves.analysis import max_unsigned_curvature
from curves.base import BaseCurve
from curves.factory import make_circle, make_ellipse, make_peanut, perturb_fourier, random_perturbed_ellipses
from curves.geometry import is_simple
from curves.polyline import PolylineCurve, regular_polygon
from cli_io.curve_io import write_curve
from utils.errors import GenerationFailedError, PerturbationRejectedError
from utils.helpers import TWO_PI

logger = logging.getLogger(__name__)


class ScenarioKind(str, Enum):
    ELLIPSE = "ellipse"
    CIRCLE = "circle"
    PEANUT = "peanut"
    PERTURBED_ELLIPSE = "perturbed_ellipse"
    PERTURBED_ENSEMBLE = "perturbed_ensemble"
    NOISY_POLYLINE = "noisy_polyline"
    ANNULUS_STAR = "annulus_star"
    CIRCLE_POLYLINE = "circle_polyline"


class ScenarioSpec(BaseModel):
    """
    Curve generator parameters.

    Attributes:
        name: Base name of the written files
        kind: Curve family
        a, b: Ellipse semi-axes (ellipse-based families)
        radius: Circle radius
        neck: Peanut waist width
        amplitude: Perturbation or noise amplitude
        harmonics: Highest perturbed harmonic
        vertices: Polygon vertex count
        count: Ensemble size
        inner_radius, outer_radius: Annulus radii
        lobes: Star lobe count
        seed: Random seed
        output_dir: Directory receiving the curve files
    """

    name: str = "curve"
    kind: ScenarioKind = ScenarioKind.ELLIPSE
    a: float = Field(default=2.0, gt=0)
    b: float = Field(default=1.0, gt=0)
    radius: float = Field(default=1.0, gt=0)
    neck: float = Field(default=0.1, gt=0)
    amplitude: float = Field(default=0.02, ge=0)
    harmonics: int = Field(default=6, ge=1)
    vertices: int = Field(default=400, ge=3)
    count: int = Field(default=20, ge=1)
    inner_radius: float = Field(default=1.0, gt=0)
    outer_radius: float = Field(default=2.2, gt=0)
    lobes: int = Field(default=5, ge=1)
    seed: int = Field(default=0, ge=0)
    output_dir: str = "."

    @model_validator(mode="after")
    def _annulus_order(self) -> "ScenarioSpec":
        if self.outer_radius < self.inner_radius:
            raise ValueError("outer_radius must be at least inner_radius")
        return self


def noisy_polyline(base: BaseCurve, vertices: int, amplitude: float, seed: int) -> PolylineCurve:
    """
    Polygon through ``vertices`` uniformly spaced points of ``base``, each
    moved along the base normal by a uniform offset in [−amplitude, amplitude].
    """
    rng = np.random.default_rng(seed)
    grid = base.grid(vertices)
    tangent = base.derivative(grid, 1)
    normal = np.column_stack([tangent[:, 1], -tangent[:, 0]]) / np.hypot(tangent[:, 0], tangent[:, 1])[:, None]
    offsets = rng.uniform(-amplitude, amplitude, size=vertices)
    return PolylineCurve(base.eval(grid) + offsets[:, None] * normal, jordan=True)


def annulus_star(inner: float, outer: float, vertices: int, lobes: int, seed: int) -> PolylineCurve:
    """Star-shaped polygon strictly inside the annulus inner < |x| < outer."""
    rng = np.random.default_rng(seed)
    angles = np.arange(vertices) * (TWO_PI / vertices)
    middle = 0.5 * (inner + outer)
    half = 0.5 * (outer - inner)
    radii = middle + half * (0.8 * np.cos(lobes * angles) + 0.15 * rng.uniform(-1.0, 1.0, size=vertices))
    return PolylineCurve(radii[:, None] * np.column_stack([np.cos(angles), np.sin(angles)]), jordan=True)


def _checked(name: str, curve: BaseCurve) -> Tuple[str, BaseCurve]:
    if curve.jordan and not is_simple(curve):
        raise GenerationFailedError(f"Generated curve '{name}' is not simple")
    return name, curve


def generate_curves(spec: ScenarioSpec) -> List[Tuple[str, BaseCurve]]:
    """
    Build the curves a scenario describes, without writing them.

    Returns:
        List of (file stem, curve)

    Raises:
        GenerationFailedError: If a generated Jordan curve fails the
            simplicity check or a perturbation is rejected
    """
    kind = spec.kind
    if kind is ScenarioKind.ELLIPSE:
        return [_checked(spec.name, make_ellipse(spec.a, spec.b))]
    if kind is ScenarioKind.CIRCLE:
        return [_checked(spec.name, make_circle(spec.radius))]
    if kind is ScenarioKind.PEANUT:
        peanut = make_peanut(spec.neck)
        logger.info(f"Peanut with neck {spec.neck}: κ_max = {max_unsigned_curvature(peanut):.6g}")
        return [_checked(spec.name, peanut)]
    if kind is ScenarioKind.PERTURBED_ELLIPSE:
        try:
            curve = perturb_fourier(make_ellipse(spec.a, spec.b), spec.amplitude, spec.harmonics, spec.seed)
        except PerturbationRejectedError as e:
            raise GenerationFailedError(str(e))
        return [_checked(spec.name, curve)]
    if kind is ScenarioKind.PERTURBED_ENSEMBLE:
        ensemble = random_perturbed_ellipses(spec.count, spec.a, spec.b, spec.amplitude, spec.harmonics, spec.seed)
        if len(ensemble) < spec.count:
            raise GenerationFailedError(f"Only {len(ensemble)} of {spec.count} perturbed ellipses passed the checks")
        return [_checked(f"{spec.name}_{seed:03d}", curve) for seed, curve in ensemble]
    if kind is ScenarioKind.NOISY_POLYLINE:
        base = make_ellipse(spec.a, spec.b)
        return [_checked(spec.name, noisy_polyline(base, spec.vertices, spec.amplitude, spec.seed))]
    if kind is ScenarioKind.ANNULUS_STAR:
        star = annulus_star(spec.inner_radius, spec.outer_radius, spec.vertices, spec.lobes, spec.seed)
        return [_checked(spec.name, star)]
    return [_checked(spec.name, regular_polygon(spec.vertices, spec.radius))]


def generate(spec: ScenarioSpec) -> List[Path]:
    """
    Write the scenario's curve files into ``spec.output_dir``.

    Returns:
        Paths of the written files
    """
    directory = Path(spec.output_dir)
    paths = [write_curve(curve, directory / f"{stem}.json") for stem, curve in generate_curves(spec)]
    logger.info(f"Scenario '{spec.name}' ({spec.kind.value}): wrote {len(paths)} curve files to {directory}")
    return paths
