"""
Validators Module.

This module provides validation utilities for curve data, search
parameters and homotopy schedules.
"""

from typing import Any, Sequence
import math
import logging

import numpy as np

logger = logging.getLogger(__name__)


class ValidationError(Exception):
    """Custom validation error."""
    pass


class CurveFormatError(ValidationError):
    """Curve or homotopy file does not match the expected format."""
    pass


class OrientationError(ValidationError):
    """Quadrilateral vertices are not in the source orientation order."""
    pass


def validate_coefficients(coefficients: Any) -> bool:
    """
    Validate a harmonic coefficient table.

    Args:
        coefficients: Array-like of shape (K+1, 4), rows [ax, ay, bx, by]

    Returns:
        True if valid, False otherwise
    """
    try:
        table = np.asarray(coefficients, dtype=float)
    except (TypeError, ValueError):
        return False

    if table.ndim != 2 or table.shape[1] != 4 or table.shape[0] < 2:
        return False

    if not np.all(np.isfinite(table)):
        return False

    # The constant term has no sine part
    if table[0, 2] != 0.0 or table[0, 3] != 0.0:
        logger.warning("Nonzero sine coefficients on harmonic 0 are ignored")

    return True


def validate_points(points: Any) -> bool:
    """
    Validate a closed polyline vertex list.

    Args:
        points: Array-like of shape (n, 2)

    Returns:
        True if valid, False otherwise
    """
    try:
        array = np.asarray(points, dtype=float)
    except (TypeError, ValueError):
        return False

    if array.ndim != 2 or array.shape[1] != 2 or array.shape[0] < 3:
        return False

    if not np.all(np.isfinite(array)):
        return False

    # Consecutive vertices must be distinct, including the closing edge
    edges = np.roll(array, -1, axis=0) - array
    return bool(np.all(np.hypot(edges[:, 0], edges[:, 1]) > 0.0))


def validate_positive(value: Any) -> bool:
    """Validate a finite positive scalar."""
    return isinstance(value, (int, float)) and math.isfinite(value) and value > 0


def validate_grid(grid_n: Any, minimum: int = 16) -> bool:
    """
    Validate a seeding grid size.

    Args:
        grid_n: Grid resolution
        minimum: Smallest admissible resolution

    Returns:
        True if valid, False otherwise
    """
    return isinstance(grid_n, (int, np.integer)) and grid_n >= minimum


def validate_quadruple(params: Sequence[float]) -> bool:
    """Validate four finite curve parameters."""
    try:
        array = np.asarray(params, dtype=float)
    except (TypeError, ValueError):
        return False
    return array.shape == (4,) and bool(np.all(np.isfinite(array)))


def validate_times(times: Sequence[float]) -> bool:
    """
    Validate a census schedule.

    Args:
        times: Homotopy times

    Returns:
        True if the schedule lies in [0, 1] and contains both endpoints
    """
    if not times:
        return False

    if any(not (0.0 <= t <= 1.0) for t in times):
        return False

    return any(t == 0.0 for t in times) and any(t == 1.0 for t in times)


def validate_seed(seed: Any) -> bool:
    """Validate a random seed."""
    return isinstance(seed, (int, np.integer)) and 0 <= seed < 2**32
