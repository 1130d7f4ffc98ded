"""
Fourier Curve Module.

Closed curves given by a finite harmonic expansion

    γ(s) = Σ_k A_k cos(ks) + B_k sin(ks),   A_k, B_k ∈ R²,

with derivatives of every order in closed form.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Optional
import logging
import math

import numpy as np
from scipy.integrate import quad

from curves.base import ArrayLike, BaseCurve
from utils.helpers import rotation_matrix
from utils.validators import ValidationError, validate_coefficients

logger = logging.getLogger(__name__)


def _harmonic_sum(table: np.ndarray, s: ArrayLike, order: int) -> np.ndarray:
    """
    Evaluate Σ k^m [A_k cos(ks + mπ/2) + B_k sin(ks + mπ/2)].

    ``table`` has rows [a_x, a_y, b_x, b_y] (vector case) or [a, b]
    (scalar case); the output keeps the column split.
    """
    s_arr = np.asarray(s, dtype=float)
    k = np.arange(table.shape[0], dtype=float)
    phase = np.multiply.outer(s_arr, k) + order * (math.pi / 2.0)
    scale = k ** order
    half = table.shape[1] // 2
    return (np.cos(phase) * scale) @ table[:, :half] + (np.sin(phase) * scale) @ table[:, half:]


def fit_harmonics(values: np.ndarray, max_harmonic: int) -> np.ndarray:
    """
    Least-squares harmonic fit of uniformly sampled periodic data.

    Args:
        values: Samples at s_j = 2πj/N, shape (N,) or (N, d)
        max_harmonic: Highest harmonic kept; must be below N/2

    Returns:
        Table of shape (max_harmonic+1, 2d): cosine columns then sine columns
    """
    values = np.asarray(values, dtype=float)
    squeeze = values.ndim == 1
    if squeeze:
        values = values[:, None]

    n = values.shape[0]
    if 2 * max_harmonic >= n:
        raise ValidationError(f"Need more than {2 * max_harmonic} samples for {max_harmonic} harmonics, got {n}")

    spectrum = np.fft.rfft(values, axis=0) / n
    cos_part = 2.0 * spectrum[: max_harmonic + 1].real
    sin_part = -2.0 * spectrum[: max_harmonic + 1].imag
    cos_part[0] = spectrum[0].real
    sin_part[0] = 0.0
    return np.hstack([cos_part, sin_part])


@dataclass(frozen=True, eq=False)
class PeriodicSeries:
    """Scalar trigonometric polynomial with rows [a_k, b_k]."""

    table: np.ndarray

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def fit(cls, values: np.ndarray, max_harmonic: int) -> "PeriodicSeries":
        return cls(fit_harmonics(values, max_harmonic))

    def __call__(self, s: ArrayLike, order: int = 0) -> ArrayLike:
        result = _harmonic_sum(self.table, s, order)
        return result[..., 0]


@dataclass(frozen=True, eq=False)
class FourierCurve(BaseCurve):
    """
    Closed curve defined by harmonic coefficients.

    Attributes:
        coefficients: Array of shape (K+1, 4), row k = [a_k.x, a_k.y, b_k.x, b_k.y]
        jordan: Caller's claim that the curve is simple
    """

    coefficients: np.ndarray
    jordan: bool = False
    _sample_cache: Dict[int, np.ndarray] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if not validate_coefficients(self.coefficients):
            raise ValidationError("Coefficients must be a finite (K+1, 4) table with K ≥ 1")

        table = np.array(self.coefficients, dtype=float)
        table[0, 2:] = 0.0
        table.setflags(write=False)
        object.__setattr__(self, "coefficients", table)

    @property
    def kind(self) -> str:
        return "fourier"

    @property
    def harmonics(self) -> int:
        """Highest harmonic index K."""
        return self.coefficients.shape[0] - 1

    def derivative(self, s: ArrayLike, order: int = 0) -> np.ndarray:
        if order < 0:
            raise ValidationError("Derivative order must be non-negative")
        return _harmonic_sum(self.coefficients, s, order)

    @cached_property
    def total_length(self) -> float:
        length, _ = quad(self.speed, 0.0, 2.0 * math.pi, limit=400, epsabs=1e-13, epsrel=1e-13)
        return float(length)

    def padded(self, max_harmonic: int) -> "FourierCurve":
        """Same curve with zero rows appended up to ``max_harmonic``."""
        if max_harmonic <= self.harmonics:
            return self
        table = np.zeros((max_harmonic + 1, 4))
        table[: self.harmonics + 1] = self.coefficients
        return FourierCurve(table, jordan=self.jordan)

    def transformed(self, angle: float = 0.0, shift: Any = (0.0, 0.0)) -> "FourierCurve":
        rotation = rotation_matrix(angle)
        table = np.array(self.coefficients)
        table[:, 0:2] = table[:, 0:2] @ rotation.T
        table[:, 2:4] = table[:, 2:4] @ rotation.T
        table[0, 0:2] += np.asarray(shift, dtype=float)
        return FourierCurve(table, jordan=self.jordan)

    def scaled(self, factor: float) -> "FourierCurve":
        """Dilate about the origin."""
        return FourierCurve(self.coefficients * factor, jordan=self.jordan)

    @classmethod
    def from_samples(
        cls,
        points: np.ndarray,
        max_harmonic: int,
        jordan: bool = False,
    ) -> "FourierCurve":
        """
        Fit a Fourier curve to points sampled on a uniform parameter grid.

        Args:
            points: Array of shape (N, 2) at s_j = 2πj/N
            max_harmonic: Highest harmonic kept (< N/2)
            jordan: Simplicity claim carried by the result

        Returns:
            Fitted FourierCurve
        """
        table = fit_harmonics(points, max_harmonic)
        return cls(table[:, [0, 1, 2, 3]], jordan=jordan)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": self.kind,
            "coeffs": self.coefficients.tolist(),
            "jordan": bool(self.jordan),
        }


def coefficient_table(
    cos_terms: Dict[int, Any],
    sin_terms: Optional[Dict[int, Any]] = None,
) -> np.ndarray:
    """
    Assemble a coefficient table from per-harmonic vectors.

    Args:
        cos_terms: Mapping k -> A_k
        sin_terms: Mapping k -> B_k

    Returns:
        Array of shape (K+1, 4)
    """
    sin_terms = sin_terms or {}
    top = max(list(cos_terms) + list(sin_terms) + [1])
    table = np.zeros((top + 1, 4))
    for k, vector in cos_terms.items():
        table[k, 0:2] = vector
    for k, vector in sin_terms.items():
        table[k, 2:4] = vector
    return table
