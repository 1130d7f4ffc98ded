"""
Square refinement.

Smooth curves use damped Newton on the residual system with the analytic
Jacobian. Polylines have no usable derivative at corners, so the two free
diagonal parameters are fitted by Nelder–Mead on the distance of the
constructed vertices to the polygon.
"""

from typing import Optional
import logging

import numpy as np
from scipy.optimize import minimize

from config.config import SEARCH_CONFIG
from curves.base import BaseCurve
from curves.polyline import PolylineCurve
from curves.projection import project_points
from squares.candidate import SquareCandidate
from squares.residual import square_from_diagonal, square_jacobian, square_residual
from utils.errors import DegenerateJacobianError, NonConvergenceError
from utils.validators import ValidationError, validate_quadruple

logger = logging.getLogger(__name__)


def default_tolerance(curve: BaseCurve) -> float:
    """Residual tolerance scaled by curve length."""
    factor = SEARCH_CONFIG["polyline_tol_factor"] if isinstance(curve, PolylineCurve) else SEARCH_CONFIG["tol_factor"]
    return factor * curve.total_length


def is_continuum_point(jacobian: np.ndarray) -> bool:
    """Rank-deficient Jacobian at a solution: the square moves in a family."""
    singular = np.linalg.svd(jacobian, compute_uv=False)
    return bool(singular[-1] <= SEARCH_CONFIG["continuum_rcond"] * singular[0])


def newton_refine(
    curve: BaseCurve,
    seed,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> SquareCandidate:
    """
    Refine a seed to an inscribed square.

    Args:
        curve: FourierCurve (or PolylineCurve, handled derivative-free)
        seed: Four parameters
        tol: Residual norm tolerance (default 1e-11 × total_length)
        max_iter: Iteration cap

    Returns:
        SquareCandidate with residual_norm ≤ tol

    Raises:
        NonConvergenceError: If the iteration cap is reached
        DegenerateJacobianError: If the Jacobian condition number exceeds
            SEARCH_CONFIG["max_condition"] (1e12) while the residual norm is
            above 1e3 × tol. Closer to tolerance an ill-conditioned step is
            still taken by least squares, so squares of a continuum (circles)
            converge and come back flagged ``continuum``.
    """
    if not validate_quadruple(seed):
        raise ValidationError("Seed must be four finite parameters")

    tol = default_tolerance(curve) if tol is None else tol
    max_iter = SEARCH_CONFIG["max_iter"] if max_iter is None else max_iter

    if isinstance(curve, PolylineCurve):
        return refine_on_polyline(curve, seed, tol, max_iter)

    s = np.asarray(seed, dtype=float).copy()
    residual = square_residual(curve, s)
    norm = float(np.linalg.norm(residual))

    for iteration in range(max_iter + 1):
        if norm <= tol:
            continuum = is_continuum_point(square_jacobian(curve, s))
            return SquareCandidate.from_params(curve, s, norm, iteration, continuum)
        if iteration == max_iter:
            break

        jacobian = square_jacobian(curve, s)
        condition = np.linalg.cond(jacobian)
        if (not np.isfinite(condition) or condition > SEARCH_CONFIG["max_condition"]) and norm > 1e3 * tol:
            raise DegenerateJacobianError(
                f"Jacobian condition {condition:.3e} at residual {norm:.3e}",
                params=s.copy(),
                residual_norm=norm,
            )

        step = np.linalg.lstsq(jacobian, -residual, rcond=None)[0]

        damping = 1.0
        while damping > 1e-4:
            trial = s + damping * step
            trial_residual = square_residual(curve, trial)
            trial_norm = float(np.linalg.norm(trial_residual))
            if trial_norm < norm:
                break
            damping *= 0.5
        else:
            raise NonConvergenceError(
                f"Line search stalled at residual {norm:.3e}",
                params=s.copy(),
                residual_norm=norm,
            )

        s, residual, norm = trial, trial_residual, trial_norm

    raise NonConvergenceError(
        f"No convergence after {max_iter} iterations (residual {norm:.3e})",
        params=s.copy(),
        residual_norm=norm,
    )


def refine_on_polyline(
    curve: PolylineCurve,
    seed,
    tol: float,
    max_iter: int,
) -> SquareCandidate:
    """
    Derivative-free refinement on a polygon.

    The diagonal endpoints (s1, s3) are the unknowns; the objective is the
    squared distance of the two constructed vertices to the polygon.
    """
    def objective(x: np.ndarray) -> float:
        p = curve.eval(x)
        p2, p4 = square_from_diagonal(p[0], p[1])
        d = curve.distance(np.vstack([p2, p4]))
        return float(d[0] ** 2 + d[1] ** 2)

    x0 = np.array([seed[0], seed[2]], dtype=float)
    step = np.pi / max(curve.vertex_count, 8)
    simplex = np.array([x0, x0 + [step, 0.0], x0 + [0.0, step]])
    result = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "xatol": 1e-13,
            "fatol": 1e-3 * tol * tol,
            "maxiter": 40 * max_iter,
            "maxfev": 80 * max_iter,
        },
    )

    residual = float(np.sqrt(max(result.fun, 0.0)))
    if residual > tol:
        raise NonConvergenceError(
            f"Polyline refinement stopped at distance residual {residual:.3e}",
            params=result.x,
            residual_norm=residual,
        )

    p = curve.eval(result.x)
    p2, p4 = square_from_diagonal(p[0], p[1])
    s2, s4 = project_points(curve, np.vstack([p2, p4])).params
    params = [result.x[0], s2, result.x[1], s4]
    return SquareCandidate.from_params(curve, params, residual, int(result.nit))
