"""
Square Finder Module.

Seeds → refinement → orientation filter → deduplication → degeneracy
filter, with the result in canonical order.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence
import logging

import numpy as np

from config.config import SEARCH_CONFIG
from curves.base import BaseCurve
from curves.fourier import FourierCurve
from curves.polyline import PolylineCurve
from squares.candidate import Orientation, SquareCandidate
from squares.refine import default_tolerance, newton_refine
from squares.seeding import diagonal_seed_search
from utils.errors import RefinementError

logger = logging.getLogger(__name__)


@dataclass
class SquareSearchConfig:
    """
    Square search settings. ``None`` fields are resolved per curve.

    Attributes:
        grid_n: Seed grid (64 for smooth curves, 2 × vertex count for polylines)
        tol: Residual tolerance (× total_length factor from SEARCH_CONFIG)
        min_sidelength: Smallest reported sidelength (1e-6 × total_length)
        dedup_tol: Vertex distance under which candidates coincide
        max_iter: Refinement iteration cap
        seed_threshold: Relative diagonal score cut-off
        workers: Refinement threads
    """

    grid_n: Optional[int] = None
    tol: Optional[float] = None
    min_sidelength: Optional[float] = None
    dedup_tol: Optional[float] = None
    max_iter: int = SEARCH_CONFIG["max_iter"]
    seed_threshold: float = SEARCH_CONFIG["seed_threshold"]
    workers: int = SEARCH_CONFIG["workers"]

    @classmethod
    def from_config(cls, **overrides) -> "SquareSearchConfig":
        """Defaults from SEARCH_CONFIG with keyword overrides (``None`` values ignored)."""
        return cls(**{key: value for key, value in overrides.items() if value is not None})

    def resolved(self, curve: BaseCurve) -> "SquareSearchConfig":
        length = curve.total_length
        grid_n = self.grid_n
        if grid_n is None:
            if isinstance(curve, PolylineCurve):
                grid_n = min(
                    max(SEARCH_CONFIG["polyline_grid_factor"] * curve.vertex_count, 16),
                    SEARCH_CONFIG["polyline_grid_cap"],
                )
            else:
                grid_n = SEARCH_CONFIG["grid_n"]

        return replace(
            self,
            grid_n=int(grid_n),
            tol=default_tolerance(curve) if self.tol is None else self.tol,
            min_sidelength=SEARCH_CONFIG["min_sidelength_factor"] * length if self.min_sidelength is None else self.min_sidelength,
            dedup_tol=SEARCH_CONFIG["dedup_factor"] * length if self.dedup_tol is None else self.dedup_tol,
        )


def deduplicate(candidates: Sequence[SquareCandidate], tol: float) -> List[SquareCandidate]:
    """
    Collapse candidates whose vertex sets agree within ``tol`` (up to cyclic
    relabelling), keeping the smallest residual of each group.
    """
    unique: List[SquareCandidate] = []
    for candidate in sorted(candidates, key=lambda c: c.residual_norm):
        if all(candidate.vertex_distance(kept) > tol for kept in unique):
            unique.append(candidate)
    return unique


def collapse_continua(candidates: Sequence[SquareCandidate], tol: float) -> List[SquareCandidate]:
    """
    Keep one representative per square continuum.

    Continuum members share centre and sidelength; anything flagged
    ``continuum`` that matches an earlier member on both is dropped.
    """
    kept: List[SquareCandidate] = []
    dropped = 0
    for candidate in candidates:
        if candidate.continuum and any(
            other.continuum
            and np.linalg.norm(other.center - candidate.center) <= tol
            and abs(other.sidelength - candidate.sidelength) <= tol
            for other in kept
        ):
            dropped += 1
            continue
        kept.append(candidate)

    if any(c.continuum for c in kept):
        logger.warning(
            f"Square continuum detected (rank-deficient Jacobian); reporting representatives "
            f"and collapsing {dropped} family members"
        )
    return kept


def refine_seeds(curve: BaseCurve, seeds: np.ndarray, config: SquareSearchConfig) -> List[SquareCandidate]:
    """Refine every seed, dropping failures."""
    def attempt(seed: np.ndarray) -> Optional[SquareCandidate]:
        try:
            return newton_refine(curve, seed, config.tol, config.max_iter)
        except RefinementError as e:
            logger.debug(f"Seed {np.round(seed, 4)} rejected: {e}")
            return None

    if config.workers > 1 and len(seeds) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            results = list(executor.map(attempt, seeds))
    else:
        results = [attempt(seed) for seed in seeds]
    return [candidate for candidate in results if candidate is not None]


def find_all_squares(curve: BaseCurve, config: Optional[SquareSearchConfig] = None) -> List[SquareCandidate]:
    """
    All inscribed squares of positive sidelength the search can reach.

    Args:
        curve: FourierCurve or PolylineCurve
        config: Search settings

    Returns:
        Deduplicated counterclockwise candidates, canonically labelled and
        sorted by their first parameter
    """
    config = (config or SquareSearchConfig()).resolved(curve)

    seeds = diagonal_seed_search(curve, config.grid_n, threshold=config.seed_threshold)
    refined = refine_seeds(curve, seeds, config)

    accepted = [
        candidate.canonical()
        for candidate in refined
        if candidate.residual_norm <= config.tol and candidate.orientation == Orientation.COUNTERCLOCKWISE
    ]
    unique = deduplicate(accepted, config.dedup_tol)
    positive = [candidate for candidate in unique if candidate.sidelength >= config.min_sidelength]
    squares = sorted(collapse_continua(positive, config.dedup_tol), key=lambda c: float(c.params[0]))

    logger.info(
        f"{len(seeds)} seeds, {len(refined)} converged, {len(squares)} squares "
        f"(grid {config.grid_n}, tol {config.tol:.2e})"
    )

    if not squares and isinstance(curve, FourierCurve) and curve.jordan:
        logger.warning(
            "No inscribed square found on a smooth Jordan curve; generic smooth Jordan curves "
            "carry an odd number of squares, so the seeding grid is probably too coarse"
        )
    return squares
