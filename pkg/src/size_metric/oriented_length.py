"""
Oriented length and quadrilateral size.

The oriented length of a source arc is the signed arclength travelled on
the target curve by the lifted image of the arc: forward travel counts
positive, backward travel negative. The size of an inscribed
quadrilateral is the smallest sum of three of its four |oriented
lengths|.
"""

from typing import Sequence, Tuple
import logging
import math

import numpy as np

from curves.analysis import arc_length
from curves.base import BaseCurve
from size_metric.correspondence import ParamCorrespondence
from squares.candidate import SquareCandidate
from utils.helpers import TWO_PI
from utils.validators import OrientationError

logger = logging.getLogger(__name__)


def arclength_position(curve: BaseCurve, lifted: float) -> float:
    """Arclength coordinate of a lifted parameter: whole turns count L each."""
    turns = math.floor(lifted / TWO_PI)
    return turns * curve.total_length + arc_length(curve, 0.0, lifted - turns * TWO_PI)


def oriented_length(
    target: BaseCurve,
    corr: ParamCorrespondence,
    arc: Tuple[float, float],
    reverse: bool = False,
) -> float:
    """
    Signed length of the image of a source arc.

    Args:
        target: Target curve of ``corr``
        corr: Correspondence from the source curve to ``target``
        arc: (start, end) source parameters; the arc runs forward from start
        reverse: Traverse the arc from end back to start (negates the result)

    Returns:
        L_o of the arc
    """
    start, end = float(arc[0]), float(arc[1])
    stop = start + float(np.mod(end - start, TWO_PI))
    length = arclength_position(target, float(corr.lift_at(stop))) - arclength_position(
        target, float(corr.lift_at(start))
    )
    return -length if reverse else length


def cyclic_order(params: Sequence[float]) -> np.ndarray:
    """
    Relabelling that puts four parameters in increasing cyclic order
    starting from the smallest.

    Raises:
        OrientationError: If the labels run clockwise around the circle
    """
    wrapped = np.mod(np.asarray(params, dtype=float), TWO_PI)
    forward = np.mod(np.roll(wrapped, -1) - wrapped, TWO_PI)
    # Increasing cyclic order wraps exactly once
    if forward.sum() > TWO_PI * 1.5:
        raise OrientationError("Quadrilateral labels run against the curve orientation (reflected labelling)")
    start = int(np.argmin(wrapped))
    return np.roll(wrapped, -start)


def _arcs(params: np.ndarray):
    return [(params[i], params[(i + 1) % 4]) for i in range(4)]


def oriented_arc_lengths(square: SquareCandidate, target: BaseCurve, corr: ParamCorrespondence) -> np.ndarray:
    """L_o of the four arcs between consecutive square parameters (cyclic order)."""
    params = cyclic_order(square.params)
    return np.array([oriented_length(target, corr, arc) for arc in _arcs(params)])


def size_from_lengths(lengths: Sequence[float]) -> float:
    """min over the excluded arc of the sum of the other three |L_o|."""
    magnitudes = np.abs(np.asarray(lengths, dtype=float))
    return float(magnitudes.sum() - magnitudes.max())


def square_size(square: SquareCandidate, target: BaseCurve, corr: ParamCorrespondence) -> float:
    """
    Size of an inscribed quadrilateral with respect to a correspondence.

    Args:
        square: Quadrilateral on the source curve of ``corr``
        target: Target curve
        corr: Correspondence

    Returns:
        Size (≥ 0)
    """
    return size_from_lengths(oriented_arc_lengths(square, target, corr))


def identity_arc_lengths(curve: BaseCurve, square: SquareCandidate) -> np.ndarray:
    """Arclengths of the four arcs between consecutive square parameters."""
    params = cyclic_order(square.params)
    return np.array([arc_length(curve, a, b) for a, b in _arcs(params)])


def square_size_identity(curve: BaseCurve, square: SquareCandidate) -> float:
    """
    Size with respect to the identity correspondence: total length minus the
    longest of the four arcs.
    """
    arcs = identity_arc_lengths(curve, square)
    if np.count_nonzero(arcs) == 0:
        return 0.0
    return float(curve.total_length - arcs.max())
