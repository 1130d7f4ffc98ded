"""
End-to-end certification pipelines.

``certify_main_theorem`` checks the closeness and degree hypotheses for a
polygon near a smooth Jordan curve and then searches the polygon for an
inscribed square. ``annulus_scenario`` does the same for a polygon inside
a thin annulus. ``approximating_sequence`` builds smooth approximations of
a polygon and ``sequence_report`` tabulates their squares. ``peanut_demonstration``
shows a small square whose size is still large.
"""

from dataclasses import replace
from typing import List, Optional, Sequence
import logging
import math

import numpy as np
import pandas as pd

from config.config import CURVE_CONFIG, VERIFY_CONFIG
from curves.analysis import max_unsigned_curvature
from curves.factory import make_peanut
from curves.fourier import FourierCurve
from curves.geometry import is_simple
from curves.polyline import PolylineCurve
from curves.projection import project_points
from curves.winding import winding_degree
from size_metric.correspondence import ParamCorrespondence
from size_metric.oriented_length import square_size, square_size_identity
from squares.finder import SquareSearchConfig, find_all_squares
from utils.validators import ValidationError
from verify.checks import SQRT2, closeness_budget, small_square_bound
from verify.report import CheckReport, Verdict

logger = logging.getLogger(__name__)

DIRECTION_NOTE = (
    "f is built from the image of the polygon to the image of the smooth curve; "
    "the opposite direction also appears in the literature"
)


def _largest(squares):
    return max(squares, key=lambda square: square.sidelength)


def certify_main_theorem(
    gamma: FourierCurve,
    beta: PolylineCurve,
    config: Optional[SquareSearchConfig] = None,
) -> CheckReport:
    """
    Certify that a polygon close to a smooth Jordan curve has an inscribed square.

    Args:
        gamma: Smooth simple regular curve
        beta: Polygon
        config: Square search settings for the polygon

    Returns:
        CheckReport: holds when the displacement is below 1/(10κ), the
        projection map has degree 1 and a positive square is found;
        inapplicable when a hypothesis fails

    Raises:
        ProjectionAmbiguityError: If some polygon point has two nearest
            points on gamma
    """
    name = "main_theorem"
    kappa = max_unsigned_curvature(gamma)
    budget = closeness_budget(kappa)
    values = {"kappa": kappa, "budget": budget, "vertex_count": beta.vertex_count}

    if not (gamma.is_regular() and is_simple(gamma)):
        return CheckReport.inapplicable(name, values, "Smooth curve is not simple and regular")

    samples = max(CURVE_CONFIG["sample_count"] // 2, VERIFY_CONFIG["polyline_projection_factor"] * beta.vertex_count)
    f = ParamCorrespondence.from_projection(beta, gamma, samples, ref="gamma", strict=True)
    corner_distance = float(np.max(project_points(gamma, beta.vertices).distances))
    displacement = max(f.max_displacement, corner_distance)
    values.update({"displacement": displacement, "degree": f.degree})
    notes = [DIRECTION_NOTE]

    if displacement >= budget:
        report = CheckReport.inapplicable(name, values, f"Displacement {displacement:.6g} ≥ 1/(10κ) = {budget:.6g}")
        report.notes.extend(notes)
        return report
    if f.degree != 1:
        report = CheckReport.inapplicable(name, values, f"Projection map has degree {f.degree}")
        report.notes.extend(notes)
        return report

    squares = find_all_squares(beta, config)
    values["square_count"] = len(squares)
    if not squares:
        logger.warning("Hypotheses certified but the polygon search found no square")
        return CheckReport(name, values, Verdict.VIOLATED, -math.inf, notes=notes + ["No inscribed square found"])

    witness = _largest(squares)
    values["sidelength"] = witness.sidelength
    logger.info(
        f"Certified: displacement {displacement:.4g} < {budget:.4g}, degree 1, "
        f"square of side {witness.sidelength:.6g}"
    )
    return CheckReport.from_margin(name, values, budget - displacement, witnesses=[witness], notes=notes)


def _radial_extent(beta: PolylineCurve, center: np.ndarray):
    """Smallest and largest distance from ``center`` to the polygon."""
    start = beta.vertices - center
    edges = np.roll(beta.vertices, -1, axis=0) - beta.vertices
    fraction = np.clip(-np.einsum("nd,nd->n", start, edges) / np.einsum("nd,nd->n", edges, edges), 0.0, 1.0)
    nearest = start + fraction[:, None] * edges
    inner = float(np.min(np.hypot(nearest[:, 0], nearest[:, 1])))
    outer = float(np.max(np.hypot(start[:, 0], start[:, 1])))
    return inner, outer


def annulus_scenario(
    r: float,
    R: float,
    beta: PolylineCurve,
    center: Sequence[float] = (0.0, 0.0),
    config: Optional[SquareSearchConfig] = None,
) -> CheckReport:
    """
    Polygon in the annulus r ≤ |x − center| ≤ R with R ≤ (1 + √2)r.

    Reports containment, the radius ratio, the winding number about the
    center and the square search result.
    """
    name = "annulus"
    if not 0 < r <= R:
        raise ValidationError("Annulus radii must satisfy 0 < r ≤ R")

    center = np.asarray(center, dtype=float)
    inner, outer = _radial_extent(beta, center)
    offsets = beta.vertices - center
    winding = winding_degree(np.arctan2(offsets[:, 1], offsets[:, 0]))
    ratio_limit = 1.0 + SQRT2

    contained = inner >= r and outer <= R
    values = {
        "r": r,
        "R": R,
        "ratio": R / r,
        "ratio_limit": ratio_limit,
        "inner_distance": inner,
        "outer_distance": outer,
        "winding": winding,
    }
    facts = {"contained": contained, "ratio_ok": R <= ratio_limit * r, "winding_one": winding == 1}

    squares = find_all_squares(beta, config)
    values["square_count"] = len(squares)
    facts["square_found"] = bool(squares)

    if not (facts["contained"] and facts["ratio_ok"] and facts["winding_one"]):
        failed = ", ".join(key for key in ("contained", "ratio_ok", "winding_one") if not facts[key])
        return CheckReport.inapplicable(name, values, f"Hypotheses fail: {failed}", diagnostics=facts)

    if not squares:
        return CheckReport(name, values, Verdict.VIOLATED, -math.inf, diagnostics=facts, notes=["No inscribed square found"])

    witness = _largest(squares)
    values["sidelength"] = witness.sidelength
    return CheckReport.from_margin(name, values, ratio_limit * r - R, witnesses=[witness], diagnostics=facts)


def approximating_sequence(beta: PolylineCurve, harmonics: Sequence[int] = (8, 16, 32, 64)) -> List[FourierCurve]:
    """Truncated harmonic series of a polygon, converging to it uniformly."""
    curves = []
    for count in harmonics:
        samples = max(16 * count, 4 * beta.vertex_count)
        curves.append(FourierCurve.from_samples(beta.eval(beta.grid(samples)), count))
    return curves


def sequence_report(
    beta: PolylineCurve,
    harmonics: Sequence[int] = (8, 16, 32, 64),
    gamma: Optional[FourierCurve] = None,
    config: Optional[SquareSearchConfig] = None,
) -> pd.DataFrame:
    """
    Squares of the smooth approximations of a polygon.

    One row per approximation: harmonics, κ_max, uniform distance to the
    polygon, square count, smallest identity size and, when ``gamma`` is
    given, the largest size with respect to the projection onto ``gamma``
    next to the bound √2/(5κ) + 1/(100κ) and π/(4κ) for κ = κ_max(gamma).
    """
    kappa_gamma = max_unsigned_curvature(gamma) if gamma is not None else math.nan
    rows = []
    for count, alpha in zip(harmonics, approximating_sequence(beta, harmonics)):
        distance = float(np.max(beta.distance(alpha.samples(4 * beta.vertex_count))))
        squares = find_all_squares(alpha, config)
        identity = [square_size_identity(alpha, square) for square in squares]
        row = {
            "harmonics": count,
            "kappa": max_unsigned_curvature(alpha),
            "distance": distance,
            "square_count": len(squares),
            "min_identity_size": min(identity) if identity else math.nan,
        }
        if gamma is not None:
            f = ParamCorrespondence.from_projection(alpha, gamma, ref="gamma", strict=False)
            sizes = [square_size(square, gamma, f) for square in squares]
            row.update({
                "max_size_wrt_f": max(sizes) if sizes else math.nan,
                "small_bound": small_square_bound(kappa_gamma, 0.0) + 1.0 / (100.0 * kappa_gamma),
                "threshold": math.pi / (4.0 * kappa_gamma),
            })
        rows.append(row)
        logger.info(f"Approximation with {count} harmonics: {len(squares)} squares, distance {distance:.3g}")
    return pd.DataFrame(rows)


def peanut_demonstration(neck: float = 0.1, config: Optional[SquareSearchConfig] = None) -> CheckReport:
    """
    A peanut with a thin waist carries a square much smaller than 1/κ,
    yet its size with the identity correspondence still exceeds π/κ.

    Args:
        neck: Waist width
        config: Square search settings (the seed grid is raised to 512)

    Returns:
        CheckReport on the smallest square: margin = size − π/κ_max
    """
    name = "peanut"
    curve = make_peanut(neck)
    kappa = max_unsigned_curvature(curve)
    bound = math.pi / kappa
    values = {"neck": neck, "kappa": kappa, "bound": bound}

    config = config or SquareSearchConfig.from_config()
    grid = max(config.grid_n or 0, 512)
    squares = find_all_squares(curve, replace(config, grid_n=grid))
    values["square_count"] = len(squares)
    if not squares:
        return CheckReport(name, values, Verdict.VIOLATED, -math.inf, notes=["No inscribed square found"])

    witness = min(squares, key=lambda square: square.sidelength)
    size = square_size_identity(curve, witness)
    values.update({"sidelength": witness.sidelength, "size": size})
    notes = []
    if witness.sidelength < 2.0 * neck:
        notes.append(f"Smallest square sits in the waist: side {witness.sidelength:.4g} < 2 × neck")
    logger.info(f"Peanut (neck {neck}): smallest side {witness.sidelength:.6g}, size {size:.6g}, π/κ = {bound:.6g}")
    return CheckReport.from_margin(name, values, size - bound, witnesses=[witness], notes=notes)
