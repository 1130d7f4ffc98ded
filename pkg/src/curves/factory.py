"""
Curve Factory Module.

Constructors for the reference curve families: ellipses, seeded random
perturbations, harmonic wiggles and the peanut (dumbbell) family.
"""

from typing import Optional, Sequence
import logging
import math

import numpy as np

from curves.fourier import FourierCurve, coefficient_table
from curves.geometry import is_simple
from utils.errors import PerturbationRejectedError
from utils.validators import ValidationError, validate_positive, validate_seed

logger = logging.getLogger(__name__)


def make_ellipse(a: float, b: float, center: Sequence[float] = (0.0, 0.0)) -> FourierCurve:
    """
    Axis-aligned ellipse s ↦ (a cos s, b sin s), counterclockwise.

    Args:
        a: Semi-axis along x
        b: Semi-axis along y
        center: Centre point

    Returns:
        Jordan FourierCurve with a single first-harmonic term
    """
    if not (validate_positive(a) and validate_positive(b)):
        raise ValidationError(f"Ellipse axes must be positive, got a={a}, b={b}")

    table = coefficient_table({0: center, 1: (a, 0.0)}, {1: (0.0, b)})
    return FourierCurve(table, jordan=True)


def make_circle(radius: float = 1.0, center: Sequence[float] = (0.0, 0.0)) -> FourierCurve:
    return make_ellipse(radius, radius, center)


def perturb_fourier(
    curve: FourierCurve,
    amplitude: float,
    max_harmonic: int,
    seed: int,
) -> FourierCurve:
    """
    Add seeded uniform noise to harmonics 2..max_harmonic.

    Args:
        curve: Base curve
        amplitude: Bound on each added coefficient (≥ 0)
        max_harmonic: Highest perturbed harmonic
        seed: Random seed

    Returns:
        Perturbed FourierCurve (the input itself when amplitude is 0)

    Raises:
        PerturbationRejectedError: If the result is irregular, or not simple
            while the base curve claims to be
    """
    if amplitude < 0 or not math.isfinite(amplitude):
        raise ValidationError("Perturbation amplitude must be finite and non-negative")
    if not validate_seed(seed):
        raise ValidationError(f"Invalid seed: {seed}")
    if amplitude == 0 or max_harmonic < 2:
        return curve

    rng = np.random.default_rng(seed)
    base = curve.padded(max_harmonic)
    table = np.array(base.coefficients)
    table[2 : max_harmonic + 1] += rng.uniform(-amplitude, amplitude, size=(max_harmonic - 1, 4))
    perturbed = FourierCurve(table, jordan=curve.jordan)

    if not perturbed.is_regular():
        raise PerturbationRejectedError(f"Perturbation (seed={seed}) produced an irregular curve")
    if curve.jordan and not is_simple(perturbed):
        raise PerturbationRejectedError(f"Perturbation (seed={seed}) produced a self-intersecting curve")

    logger.debug(f"Perturbed curve with amplitude={amplitude}, harmonics≤{max_harmonic}, seed={seed}")
    return perturbed


def add_harmonic_wiggle(curve: FourierCurve, amplitude: float, harmonic: int) -> FourierCurve:
    """
    Add amplitude·(cos ks, sin ks): every point moves by exactly ``amplitude``.

    Args:
        curve: Base curve
        amplitude: Displacement radius
        harmonic: Wiggle frequency k ≥ 1

    Returns:
        Wiggled FourierCurve (simplicity claim kept when the result passes the test)
    """
    if harmonic < 1:
        raise ValidationError("Wiggle harmonic must be at least 1")

    base = curve.padded(harmonic)
    table = np.array(base.coefficients)
    table[harmonic, 0] += amplitude
    table[harmonic, 3] += amplitude
    wiggled = FourierCurve(table, jordan=False)
    if curve.jordan and is_simple(wiggled):
        wiggled = FourierCurve(table, jordan=True)
    return wiggled


def make_peanut(neck: float = 0.1, half_length: float = 2.0, bulge: float = 2.6) -> FourierCurve:
    """
    Dumbbell curve x = L cos s, y = sin s · (neck/2 + g cos² s).

    With the defaults each lobe spans 0 ≤ |x| ≤ 2 and |y| ≤ 1.03, with its
    highest point at x ≈ ±1.63. The lobes are rounded but not circular: the
    curvature is about 0.28 at the tips (±2, 0).
    The waist at x = 0 has width ``neck``. The coefficients are linear in ``neck``,
    so interpolating between two peanuts narrows or widens the waist only.
    Negative ``neck`` pinches the waist through itself.

    Args:
        neck: Waist width
        half_length: L, half the overall length
        bulge: g, lobe height parameter

    Returns:
        FourierCurve (flagged Jordan when neck > 0)
    """
    h = 0.5 * neck
    table = coefficient_table(
        {1: (half_length, 0.0)},
        {1: (0.0, h + 0.25 * bulge), 3: (0.0, 0.25 * bulge)},
    )
    # sin s cos² s = (sin s + sin 3s) / 4
    return FourierCurve(table, jordan=neck > 0)


def make_figure_eight(scale: float = 1.0) -> FourierCurve:
    """The lemniscate-like curve s ↦ (cos s, sin 2s), which crosses itself at the origin."""
    table = coefficient_table({1: (scale, 0.0)}, {2: (0.0, scale)})
    return FourierCurve(table, jordan=False)


def random_perturbed_ellipses(
    count: int,
    a: float = 2.0,
    b: float = 1.0,
    amplitude: float = 0.02,
    max_harmonic: int = 6,
    first_seed: int = 0,
    max_attempts: Optional[int] = None,
):
    """
    Seeded ensemble of simple perturbed ellipses; rejected seeds are skipped.

    Returns:
        List of (seed, FourierCurve) pairs
    """
    base = make_ellipse(a, b)
    ensemble = []
    seed = first_seed
    limit = first_seed + (max_attempts or 10 * count)
    while len(ensemble) < count and seed < limit:
        try:
            ensemble.append((seed, perturb_fourier(base, amplitude, max_harmonic, seed)))
        except PerturbationRejectedError as e:
            logger.info(f"Skipping seed {seed}: {e}")
        seed += 1
    return ensemble
