"""
Quantitative Checks Module.

Each check measures one curvature-based bound on concrete curves and
returns a CheckReport whose margin is bound minus measured value:

- initial size bound: every square of a smooth Jordan curve has size at
  least π/κ with respect to the identity;
- chord bound: an arc of length ℓ ≤ π/(4κ) has chord at least ℓ/√2;
- no intermediate squares: a curve close to a smooth reference has no
  square of size π/(4κ) with respect to the closeness map;
- small-square bound: the size of a square with respect to such a map is
  below √2/(5κ) + √2ρ.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from config.config import VERIFY_CONFIG
from curves.analysis import CurveAnalysis, analyze_curve, max_unsigned_curvature
from curves.base import BaseCurve
from size_metric.correspondence import ParamCorrespondence
from size_metric.oriented_length import (
    cyclic_order,
    oriented_arc_lengths,
    size_from_lengths,
    square_size,
    square_size_identity,
)
from squares.candidate import SquareCandidate
from squares.finder import SquareSearchConfig, find_all_squares
from utils.validators import OrientationError, ValidationError
from verify.report import CheckReport

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


def no_intermediate_self_test() -> float:
    """The constant 1 − 16√2/(10π) that must exceed 1/4."""
    return 1.0 - 16.0 * SQRT2 / (10.0 * math.pi)


def small_square_bound(kappa: float, rho: float) -> float:
    """√2/(5κ) + √2ρ."""
    return SQRT2 / (5.0 * kappa) + SQRT2 * rho


def closeness_budget(kappa: float) -> float:
    """δ = 1/(10κ)."""
    return 1.0 / (10.0 * kappa)


def check_initial_size_bound(curve: BaseCurve, config: Optional[SquareSearchConfig] = None) -> CheckReport:
    """
    Every inscribed square has identity size ≥ π/κ_max.

    Args:
        curve: Regular simple smooth curve
        config: Square search settings

    Returns:
        CheckReport with margin min(size_identity) − π/κ_max
    """
    name = "initial_size_bound"
    kappa = max_unsigned_curvature(curve)
    bound = math.pi / kappa
    values = {"kappa": kappa, "bound": bound, "total_length": curve.total_length}

    squares = find_all_squares(curve, config)
    if not squares:
        return CheckReport.inapplicable(name, values, "No inscribed square was found")

    sizes = np.array([square_size_identity(curve, square) for square in squares])
    worst = int(np.argmin(sizes))
    values.update({"min_size": float(sizes[worst]), "square_count": len(squares)})
    logger.info(f"Initial size bound: min size {sizes[worst]:.6g} vs π/κ = {bound:.6g}")
    return CheckReport.from_margin(
        name,
        values,
        float(sizes[worst]) - bound,
        witnesses=[squares[worst]],
        diagnostics={"sizes": sizes.tolist(), "sidelengths": [square.sidelength for square in squares]},
    )


def chord_gap(analysis: CurveAnalysis, starts: np.ndarray, lengths: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Chords of arcs starting at arclength ``starts`` with lengths ``lengths``,
    together with the bounds ℓ/√2.
    """
    curve = analysis.curve
    s0 = analysis.param_at_length(np.asarray(starts, dtype=float))
    s1 = analysis.param_at_length(np.asarray(starts, dtype=float) + np.asarray(lengths, dtype=float))
    gap = curve.eval(s1) - curve.eval(s0)
    chords = np.hypot(gap[..., 0], gap[..., 1])
    return chords, np.asarray(lengths, dtype=float) / SQRT2


def check_chord_bound(curve: BaseCurve, trials: Optional[int] = None, seed: int = 0) -> CheckReport:
    """
    Random subarcs of length ℓ ≤ π/(4κ_max) have chord ≥ ℓ/√2.

    Args:
        curve: Smooth curve
        trials: Number of random arcs
        seed: Random seed

    Returns:
        CheckReport with margin min(chord − ℓ/√2)
    """
    name = "chord_bound"
    trials = trials or VERIFY_CONFIG["chord_trials"]
    analysis = analyze_curve(curve)
    kappa = analysis.max_unsigned_curvature
    values = {"kappa": kappa, "trials": trials}
    if not math.isfinite(kappa):
        return CheckReport.inapplicable(name, values, "Curve has corners; κ is unbounded")

    max_length = math.pi / (4.0 * kappa)
    values["max_arc_length"] = max_length

    rng = np.random.default_rng(seed)
    starts = rng.uniform(0.0, analysis.total_length, size=trials)
    lengths = rng.uniform(0.0, max_length, size=trials)
    lengths[0] = max_length

    chords, bounds = chord_gap(analysis, starts, lengths)
    gaps = chords - bounds
    worst = int(np.argmin(gaps))
    witness = {"start": float(starts[worst]), "length": float(lengths[worst]), "chord": float(chords[worst])}
    return CheckReport.from_margin(
        name,
        values,
        float(gaps[worst]),
        tolerance=VERIFY_CONFIG["chord_tolerance"],
        witnesses=[witness],
    )


def _interior_angle(previous: np.ndarray, corner: np.ndarray, following: np.ndarray) -> float:
    u = previous - corner
    v = following - corner
    norm = np.linalg.norm(u) * np.linalg.norm(v)
    if norm == 0.0:
        return math.nan
    return float(np.arccos(np.clip(np.dot(u, v) / norm, -1.0, 1.0)))


def corner_diagnostics(
    square: SquareCandidate,
    beta: BaseCurve,
    f: ParamCorrespondence,
    kappa: float,
    delta: float,
) -> Dict[str, Any]:
    """
    Quantities of the no-intermediate argument for one square.

    The corners a_i of the square are sent to a'_i on β. Labels start after
    the excluded arc so that the size runs from a'_1 to a'_4. θ and φ are
    the angles of the path a'_1 a'_2 a'_3 a'_4 at a'_2 and a'_3; the tangent
    of β turns through at least 2π − θ − φ over an arc whose turning is at
    most size·κ.
    """
    params = cyclic_order(square.params)
    lengths = oriented_arc_lengths(square, beta, f)
    size = size_from_lengths(lengths)
    excluded = int(np.argmax(np.abs(lengths)))
    order = [(excluded + 1 + k) % 4 for k in range(4)]

    alpha_points = f.source_curve.eval(params[order])
    beta_points = beta.eval(f.evaluate(params[order]))

    theta = _interior_angle(beta_points[0], beta_points[1], beta_points[2])
    phi = _interior_angle(beta_points[1], beta_points[2], beta_points[3])
    sidelength = square.sidelength
    ratio = 2.0 * delta / sidelength if sidelength > 0 else math.inf

    return {
        "size": size,
        "theta": theta,
        "phi": phi,
        "turning_required": 2.0 * math.pi - theta - phi,
        "turning_available": size * kappa,
        "angle_floor": math.pi - 4.0 * math.asin(ratio) if ratio <= 1.0 else math.nan,
        "alpha_chord": float(np.linalg.norm(alpha_points[3] - alpha_points[0])),
        "beta_chord": float(np.linalg.norm(beta_points[3] - beta_points[0])),
        "chord_bound": size / SQRT2,
        "sidelength": sidelength,
    }


def check_no_intermediate(
    alpha: BaseCurve,
    beta: BaseCurve,
    f: ParamCorrespondence,
    config: Optional[SquareSearchConfig] = None,
) -> CheckReport:
    """
    No square of ``alpha`` has size π/(4κ) with respect to ``f``.

    Sizes inside the band π/(4κ) ± band_factor/κ count as violations.

    Args:
        alpha: Curve whose squares are measured
        beta: Smooth reference curve defining κ
        f: Correspondence from ``alpha`` onto ``beta``

    Returns:
        CheckReport with margin min|size − π/(4κ)| − band, or inapplicable
        when f displaces points by more than 1/(10κ)
    """
    name = "no_intermediate"
    kappa = max_unsigned_curvature(beta)
    delta = closeness_budget(kappa)
    threshold = math.pi / (4.0 * kappa)
    band = VERIFY_CONFIG["band_factor"] / kappa
    self_test = no_intermediate_self_test()
    values = {
        "kappa": kappa,
        "delta": delta,
        "threshold": threshold,
        "band": band,
        "displacement": f.max_displacement,
        "self_test": self_test,
    }
    diagnostics: Dict[str, Any] = {"self_test_exceeds_quarter": self_test > 0.25}

    if f.max_displacement > delta:
        return CheckReport.inapplicable(
            name, values, f"Displacement {f.max_displacement:.6g} exceeds δ = {delta:.6g}", diagnostics
        )

    squares = find_all_squares(alpha, config)
    per_square: List[Dict[str, Any]] = []
    notes: List[str] = []
    for square in squares:
        try:
            per_square.append(corner_diagnostics(square, beta, f, kappa, delta))
        except OrientationError as exc:
            notes.append(f"Skipped square at {np.round(square.params, 6).tolist()}: {exc}")
    diagnostics["squares"] = per_square

    if not per_square:
        values["square_count"] = 0
        return CheckReport.from_margin(name, values, math.inf, diagnostics=diagnostics, notes=notes or ["No squares"])

    proximity = np.array([abs(entry["size"] - threshold) for entry in per_square])
    worst = int(np.argmin(proximity))
    values.update({"square_count": len(per_square), "closest_size": per_square[worst]["size"]})
    diagnostics["proximity"] = float(proximity[worst])
    return CheckReport.from_margin(
        name,
        values,
        float(proximity[worst]) - band,
        tolerance=0.0,
        witnesses=[squares[worst]],
        diagnostics=diagnostics,
        notes=notes,
    )


def check_small_square_bound(
    alpha: BaseCurve,
    beta: BaseCurve,
    f: ParamCorrespondence,
    square: SquareCandidate,
) -> CheckReport:
    """
    Size of ``square`` with respect to ``f`` is below √2/(5κ) + √2ρ, with
    ρ its identity size on ``alpha`` and κ = κ_max(beta).
    """
    name = "small_square_bound"
    kappa = max_unsigned_curvature(beta)
    delta = closeness_budget(kappa)
    values = {"kappa": kappa, "delta": delta, "displacement": f.max_displacement}
    if f.max_displacement >= delta:
        return CheckReport.inapplicable(name, values, f"Displacement {f.max_displacement:.6g} is not below δ = {delta:.6g}")

    rho = square_size_identity(alpha, square)
    bound = small_square_bound(kappa, rho)
    size = square_size(square, beta, f)
    values.update({"rho": rho, "bound": bound, "size": size, "sidelength": square.sidelength})
    return CheckReport.from_margin(name, values, bound - size, witnesses=[square])


def combined_bound_check(kappa: float = 1.0) -> CheckReport:
    """√2/(5κ) + 1/(100κ) < π/(4κ)."""
    if not kappa > 0:
        raise ValidationError("κ must be positive")
    small = SQRT2 / (5.0 * kappa) + 1.0 / (100.0 * kappa)
    threshold = math.pi / (4.0 * kappa)
    return CheckReport.from_margin(
        "combined_bound",
        {"kappa": kappa, "small_square_bound": small, "threshold": threshold},
        threshold - small,
        tolerance=0.0,
    )


def check_arcsin_envelope(samples: Optional[int] = None) -> CheckReport:
    """arcsin(x) ≤ πx/2 on a uniform grid of [0, 1]."""
    samples = samples or VERIFY_CONFIG["arcsin_samples"]
    x = np.linspace(0.0, 1.0, samples)
    gaps = 0.5 * math.pi * x - np.arcsin(x)
    worst = int(np.argmin(gaps))
    return CheckReport.from_margin(
        "arcsin_envelope",
        {"samples": samples},
        float(gaps[worst]),
        tolerance=1e-15,
        witnesses=[{"x": float(x[worst])}],
    )


def small_square_sweep(
    alpha: BaseCurve,
    beta: BaseCurve,
    f: ParamCorrespondence,
    squares: Optional[Sequence[SquareCandidate]] = None,
    config: Optional[SquareSearchConfig] = None,
) -> CheckReport:
    """Small-square bound over every square of ``alpha``; the report keeps the smallest margin."""
    squares = find_all_squares(alpha, config) if squares is None else squares
    reports = [check_small_square_bound(alpha, beta, f, square) for square in squares]
    applicable = [report for report in reports if not math.isnan(report.margin)]
    if not applicable:
        kappa = max_unsigned_curvature(beta)
        reason = reports[0].notes[0] if reports else "No inscribed square was found"
        return CheckReport.inapplicable("small_square_bound", {"kappa": kappa}, reason)
    worst = min(applicable, key=lambda report: report.margin)
    worst.diagnostics["margins"] = [report.margin for report in applicable]
    return worst
