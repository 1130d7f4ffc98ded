"""
Base curve interface shared by the smooth and polygonal curve types.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, Union
import math

import numpy as np

from config.config import CURVE_CONFIG

ArrayLike = Union[float, np.ndarray]


class BaseCurve(ABC):
    """
    Abstract closed plane curve parametrised over the circle [0, 2π).

    Subclasses provide evaluation and derivatives; everything else
    (square search, projection, winding) is written against this
    interface.
    """

    jordan: bool = False

    @property
    @abstractmethod
    def kind(self) -> str:
        """File-format type tag of this curve."""
        pass

    @abstractmethod
    def derivative(self, s: ArrayLike, order: int = 0) -> np.ndarray:
        """
        Evaluate the ``order``-th parameter derivative.

        Args:
            s: Scalar parameter or array of parameters
            order: Derivative order (0 evaluates the curve itself)

        Returns:
            Array of shape (2,) for scalar input, (n, 2) otherwise
        """
        pass

    @property
    @abstractmethod
    def total_length(self) -> float:
        """Length of the full loop."""
        pass

    @abstractmethod
    def transformed(self, angle: float = 0.0, shift: Any = (0.0, 0.0)) -> "BaseCurve":
        """Rotate by ``angle`` about the origin, then translate by ``shift``."""
        pass

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Structured-object representation used by the curve file format."""
        pass

    def eval(self, s: ArrayLike) -> np.ndarray:
        """Point(s) on the curve; parameters are taken mod 2π."""
        return self.derivative(s, 0)

    def speed(self, s: ArrayLike) -> ArrayLike:
        """|γ′(s)|."""
        d1 = self.derivative(s, 1)
        return np.hypot(d1[..., 0], d1[..., 1])

    def grid(self, n: int) -> np.ndarray:
        """Uniform parameter grid of ``n`` points on [0, 2π)."""
        return np.arange(n) * (2.0 * math.pi / n)

    def samples(self, n: int) -> np.ndarray:
        """Curve points on the uniform ``n``-point grid (cached)."""
        cache = self.__dict__.setdefault("_sample_cache", {})
        if n not in cache:
            points = self.eval(self.grid(n))
            points.setflags(write=False)
            cache[n] = points
        return cache[n]

    @property
    def regularity_tolerance(self) -> float:
        """Minimum admissible speed: 1e-8 × total_length / 2π."""
        return CURVE_CONFIG["regularity_factor"] * self.total_length / (2.0 * math.pi)

    def is_regular(self, n: int = 1024) -> bool:
        """True when the speed stays above the regularity tolerance on an ``n``-point grid."""
        return bool(np.min(self.speed(self.grid(n))) >= self.regularity_tolerance)
