"""
Squares Module.

This module locates inscribed squares of closed curves: residual system,
diagonal seeding, Newton (or derivative-free) refinement, the full search
pipeline and an independent brute-force oracle.
"""

from .candidate import Orientation, SquareCandidate, orientation_of
from .residual import residual_from_points, square_from_diagonal, square_jacobian, square_residual
from .seeding import diagonal_scores, diagonal_seed_search
from .refine import newton_refine, refine_on_polyline
from .finder import SquareSearchConfig, deduplicate, find_all_squares
from .oracle import brute_force_oracle, match_squares, oracle_agreement

__all__ = [
    'Orientation',
    'SquareCandidate',
    'SquareSearchConfig',
    'orientation_of',
    'residual_from_points',
    'square_from_diagonal',
    'square_jacobian',
    'square_residual',
    'diagonal_scores',
    'diagonal_seed_search',
    'newton_refine',
    'refine_on_polyline',
    'deduplicate',
    'find_all_squares',
    'brute_force_oracle',
    'match_squares',
    'oracle_agreement',
]
