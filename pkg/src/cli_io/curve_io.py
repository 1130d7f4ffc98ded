"""
Curve and homotopy file I/O.

Curve files are JSON objects:

    {"type": "fourier", "coeffs": [[a0x, a0y, 0, 0], [a1x, a1y, b1x, b1y], ...]}
    {"type": "polyline", "points": [[x, y], ...]}

with an optional ``"jordan"`` flag. Homotopy specs name two curve files
(relative to the spec file), the homotopy kind and the displacement budget η.
"""

from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Union
import json
import logging

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter, field_validator
from pydantic import ValidationError as SchemaError

from continuation.homotopy import Homotopy, build_linear_homotopy, build_two_step_homotopy
from curves.base import BaseCurve
from curves.fourier import FourierCurve
from curves.polyline import PolylineCurve, polygon_area
from size_metric.correspondence import ParamCorrespondence
from utils.helpers import load_yaml_config, safe_json_dumps
from utils.validators import CurveFormatError, ValidationError

logger = logging.getLogger(__name__)


class FourierCurveFile(BaseModel):
    """Harmonic series curve file."""
    type: Literal["fourier"]
    coeffs: List[List[float]]
    jordan: bool = False

    @field_validator("coeffs")
    @classmethod
    def _four_columns(cls, rows: List[List[float]]) -> List[List[float]]:
        if len(rows) < 2 or any(len(row) != 4 for row in rows):
            raise ValueError("coeffs needs at least two rows of four numbers")
        return rows


class PolylineCurveFile(BaseModel):
    """Closed polygon curve file."""
    type: Literal["polyline"]
    points: List[List[float]]
    jordan: bool = False

    @field_validator("points")
    @classmethod
    def _planar(cls, points: List[List[float]]) -> List[List[float]]:
        if len(points) < 3 or any(len(point) != 2 for point in points):
            raise ValueError("points needs at least three [x, y] pairs")
        return points


CurveFile = Annotated[Union[FourierCurveFile, PolylineCurveFile], Field(discriminator="type")]
_curve_adapter = TypeAdapter(CurveFile)


class HomotopySpecFile(BaseModel):
    """Homotopy spec file."""
    kind: Literal["fourier_linear", "two_step"] = "fourier_linear"
    start: str
    end: str
    eta: Optional[float] = Field(default=None, gt=0)
    seed: int = 0


def parse_curve(data: Dict[str, Any]) -> BaseCurve:
    """
    Build a curve from a decoded curve-file object.

    Raises:
        CurveFormatError: On unknown ``type`` values or malformed fields
    """
    try:
        model = _curve_adapter.validate_python(data)
    except SchemaError as e:
        raise CurveFormatError(f"Invalid curve file: {e.errors()[0]['msg']} at {e.errors()[0]['loc']}")

    try:
        if isinstance(model, FourierCurveFile):
            return FourierCurve(np.array(model.coeffs, dtype=float), jordan=model.jordan)
        return PolylineCurve(np.array(model.points, dtype=float), jordan=model.jordan)
    except ValidationError as e:
        raise CurveFormatError(str(e))


def counterclockwise(curve: BaseCurve) -> BaseCurve:
    """Reparametrise a clockwise curve to run counterclockwise."""
    points = curve.vertices if isinstance(curve, PolylineCurve) else curve.samples(512)
    if polygon_area(points) >= 0:
        return curve

    logger.info("Curve runs clockwise; reversing its parametrisation")
    if isinstance(curve, PolylineCurve):
        return PolylineCurve(curve.vertices[::-1].copy(), jordan=curve.jordan)
    table = np.array(curve.coefficients)
    table[:, 2:] *= -1.0
    return FourierCurve(table, jordan=curve.jordan)


def read_curve(path: Union[str, Path], normalize: bool = False) -> BaseCurve:
    """
    Read a curve file.

    Args:
        path: JSON curve file
        normalize: Reverse clockwise curves to counterclockwise

    Returns:
        FourierCurve or PolylineCurve

    Raises:
        CurveFormatError: If the file is not a valid curve file
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except UnicodeDecodeError as e:
        raise CurveFormatError(f"{path} is not UTF-8 text: {e.reason}")
    except json.JSONDecodeError as e:
        raise CurveFormatError(f"{path} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise CurveFormatError(f"{path} must hold a JSON object")

    curve = parse_curve(data)
    logger.debug(f"Read {curve.kind} curve from {path}")
    return counterclockwise(curve) if normalize else curve


def curve_to_json(curve: BaseCurve) -> str:
    return safe_json_dumps(curve.to_dict())


def write_curve(curve: BaseCurve, path: Union[str, Path]) -> Path:
    """Write a curve file; the text depends only on the curve's data."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(curve_to_json(curve) + "\n", encoding="utf-8")
    return path


def read_homotopy_spec(path: Union[str, Path]) -> HomotopySpecFile:
    path = Path(path)
    try:
        return HomotopySpecFile.model_validate(load_yaml_config(path))
    except SchemaError as e:
        raise CurveFormatError(f"Invalid homotopy spec {path}: {e.errors()[0]['msg']}")


def load_homotopy(path: Union[str, Path], seed: Optional[int] = None) -> Homotopy:
    """
    Build the homotopy a spec file describes.

    For two-step homotopies the correspondence f is the nearest-point
    projection of the end curve onto the start curve.
    """
    path = Path(path)
    spec = read_homotopy_spec(path)
    start = read_curve(path.parent / spec.start, normalize=True)
    end = read_curve(path.parent / spec.end, normalize=True)
    if not (isinstance(start, FourierCurve) and isinstance(end, FourierCurve)):
        raise CurveFormatError("Homotopy endpoints must be fourier curves")

    seed = spec.seed if seed is None else seed
    if spec.kind == "fourier_linear":
        return build_linear_homotopy(start, end, seed=seed)

    f = ParamCorrespondence.from_projection(end, start, ref="start")
    return build_two_step_homotopy(start, end, f, eta=spec.eta, seed=seed)
