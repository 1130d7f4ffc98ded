"""
Square residual system.

For parameters s = (s1, s2, s3, s4) with p_i = γ(s_i):

    F1, F2 = p1 + p3 − p2 − p4          (diagonals share a midpoint)
    F3     = (p3 − p1)·(p4 − p2)         (diagonals are perpendicular)
    F4     = |p3 − p1|² − |p4 − p2|²     (diagonals have equal length)

F vanishes exactly on (possibly degenerate) squares.
"""

from typing import Tuple

import numpy as np

from curves.base import BaseCurve


def residual_from_points(points: np.ndarray) -> np.ndarray:
    """Residual of four plane points, shape (4, 2) or (..., 4, 2)."""
    p1, p2, p3, p4 = (points[..., i, :] for i in range(4))
    u = p3 - p1
    v = p4 - p2
    midpoint = p1 + p3 - p2 - p4
    return np.stack(
        [
            midpoint[..., 0],
            midpoint[..., 1],
            np.sum(u * v, axis=-1),
            np.sum(u * u, axis=-1) - np.sum(v * v, axis=-1),
        ],
        axis=-1,
    )


def square_residual(curve: BaseCurve, s) -> np.ndarray:
    """
    Evaluate F at four curve parameters.

    Args:
        curve: Closed curve
        s: Four parameters

    Returns:
        Array (F1, F2, F3, F4)
    """
    return residual_from_points(curve.eval(np.asarray(s, dtype=float)))


def square_jacobian(curve: BaseCurve, s) -> np.ndarray:
    """Analytic 4×4 Jacobian ∂F/∂s built from γ′."""
    s = np.asarray(s, dtype=float)
    p = curve.eval(s)
    d = curve.derivative(s, 1)
    u = p[2] - p[0]
    v = p[3] - p[1]

    jac = np.empty((4, 4))
    sign = np.array([1.0, -1.0, 1.0, -1.0])
    jac[0:2, :] = (d * sign[:, None]).T
    jac[2, :] = [-d[0] @ v, -u @ d[1], d[2] @ v, u @ d[3]]
    jac[3, :] = [-2.0 * u @ d[0], 2.0 * v @ d[1], 2.0 * u @ d[2], -2.0 * v @ d[3]]
    return jac


def square_from_diagonal(p1: np.ndarray, p3: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Remaining vertices of the counterclockwise square with diagonal p1→p3.

    Works on single points or stacked arrays of points.
    """
    center = 0.5 * (p1 + p3)
    w = p3 - center
    # R−90 w and R+90 w
    p2 = center + np.stack([w[..., 1], -w[..., 0]], axis=-1)
    p4 = center + np.stack([-w[..., 1], w[..., 0]], axis=-1)
    return p2, p4
