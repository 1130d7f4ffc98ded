"""
Size Metric Module.

This module provides parameter correspondences between curves, the
oriented length of an arc under a correspondence, and the size of an
inscribed quadrilateral.
"""

from .correspondence import ParamCorrespondence
from .oriented_length import (
    arclength_position,
    cyclic_order,
    identity_arc_lengths,
    oriented_arc_lengths,
    oriented_length,
    size_from_lengths,
    square_size,
    square_size_identity,
)

__all__ = [
    'ParamCorrespondence',
    'arclength_position',
    'cyclic_order',
    'identity_arc_lengths',
    'oriented_arc_lengths',
    'oriented_length',
    'size_from_lengths',
    'square_size',
    'square_size_identity',
]
