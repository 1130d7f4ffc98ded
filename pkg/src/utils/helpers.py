"""
Helpers Module.

This module provides helper utilities shared by the square-finding
packages: serialisation, configuration loading, angle arithmetic and
smooth ramps.
"""

from typing import Any, Dict, Union
import json
import logging
import math
from pathlib import Path

import numpy as np
import yaml

from utils.validators import ValidationError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def _json_default(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return str(obj)


def safe_json_dumps(obj: Any, indent: int = 2) -> str:
    """
    Safely serialize object to JSON.

    Numpy arrays and scalars are converted to plain lists and numbers so
    that floats are written with full precision.

    Args:
        obj: Object to serialize
        indent: Indentation width

    Returns:
        JSON string
    """
    try:
        return json.dumps(obj, default=_json_default, indent=indent, sort_keys=False)
    except (TypeError, ValueError) as e:
        logger.warning(f"Failed to serialize object to JSON: {e}")
        return json.dumps({"error": "Serialization failed", "object_type": str(type(obj))})


def load_yaml_config(file_path: Union[str, Path]) -> Dict[str, Any]:
    """
    Load YAML (or JSON) configuration file.

    Args:
        file_path: Path to YAML or JSON file

    Returns:
        Configuration dictionary

    Raises:
        FileNotFoundError: If file doesn't exist
        ValidationError: If the file is not UTF-8 text or not valid YAML
    """
    file_path = Path(file_path)

    if not file_path.exists():
        raise FileNotFoundError(f"Configuration file not found: {file_path}")

    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            return yaml.safe_load(f)
    except (yaml.YAMLError, UnicodeDecodeError) as e:
        raise ValidationError(f"Invalid YAML in {file_path}: {e}")


def wrap_difference(delta: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Reduce angle differences to [−π, π)."""
    return np.mod(np.asarray(delta) + math.pi, TWO_PI) - math.pi


def cyclic_distance(a: Union[float, np.ndarray], b: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Distance between parameters on the circle."""
    return np.abs(wrap_difference(np.asarray(a) - np.asarray(b)))


def smoothstep(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Quintic ramp from 0 to 1 with vanishing first and second derivatives at
    both ends.
    """
    x = np.clip(x, 0.0, 1.0)
    return x * x * x * (x * (6.0 * x - 15.0) + 10.0)


def rotation_matrix(angle: float) -> np.ndarray:
    """2×2 rotation by ``angle`` radians."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])
