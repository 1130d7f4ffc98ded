"""
Degree of sampled circle maps.
"""

from typing import Optional
import math

import numpy as np

from config.config import CURVE_CONFIG
from utils.errors import LiftAmbiguityError
from utils.helpers import TWO_PI, wrap_difference


def lift_samples(samples: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """
    Continuous lift of sampled circle values, starting at ``samples[0]``.

    Args:
        samples: Values in R/2πZ in cyclic order
        tol: Gaps of magnitude ≥ π − tol are rejected

    Returns:
        Lifted values (same length as ``samples``)

    Raises:
        LiftAmbiguityError: If a successive gap is too close to π
    """
    tol = CURVE_CONFIG["lift_tolerance"] if tol is None else tol
    samples = np.asarray(samples, dtype=float)
    gaps = wrap_difference(np.diff(samples))
    if gaps.size and np.max(np.abs(gaps)) >= math.pi - tol:
        worst = int(np.argmax(np.abs(gaps)))
        raise LiftAmbiguityError(f"Gap {gaps[worst]:.6f} between samples {worst} and {worst + 1} is ambiguous")
    return samples[0] + np.concatenate([[0.0], np.cumsum(gaps)])


def winding_degree(samples: np.ndarray, tol: Optional[float] = None) -> int:
    """
    Degree of a sampled map S¹ → S¹, closing step from last to first
    sample included.

    Args:
        samples: Values in R/2πZ taken at increasing source parameters
        tol: Ambiguity tolerance for successive gaps

    Returns:
        Integer degree

    Raises:
        LiftAmbiguityError: If any gap (including the closing one) is ambiguous
    """
    samples = np.asarray(samples, dtype=float)
    closed = np.append(samples, samples[0])
    lifted = lift_samples(closed, tol)
    return int(round((lifted[-1] - lifted[0]) / TWO_PI))
