"""
Census Module.

Counts the inscribed squares of a homotopy's slices, tracks them between
the endpoints and flags any trace whose size with respect to P crosses
π/(4κ) or comes within band_factor/κ of it.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
import pandas as pd

from config.config import SEARCH_CONFIG, VERIFY_CONFIG
from continuation.homotopy import Homotopy
from continuation.tracker import ContinuationTrace, StepControl, TraceEvent, track_square
from curves.analysis import max_unsigned_curvature
from size_metric.oriented_length import square_size
from squares.candidate import SquareCandidate
from squares.finder import SquareSearchConfig, find_all_squares
from utils.errors import PathLostError
from utils.validators import OrientationError, ValidationError, validate_times

logger = logging.getLogger(__name__)


@dataclass
class CensusRow:
    t: float
    count: int
    sizes: List[float] = field(default_factory=list)
    sidelengths: List[float] = field(default_factory=list)

    @property
    def parity(self) -> str:
        return "odd" if self.count % 2 else "even"


@dataclass
class CensusReport:
    """
    Census of a homotopy.

    Attributes:
        rows: One row per requested time
        traces: Tracked traces ordered by start time and start parameter
        threshold: π/(4κ) for the reference curve
        kappa: Maximum unsigned curvature of the reference curve
        band: Half-width band_factor/κ of the band around the threshold
        crossings: Traces whose size passes through the threshold
        band_entries: Traces whose size enters the band, crossing or not
        min_proximity: Closest approach of any tracked size to the threshold
        failed_traces: Traces that lost their path
        unmatched_endpoints: Forward trace endpoints with no matching t = 1 square
    """

    rows: List[CensusRow]
    traces: List[ContinuationTrace]
    threshold: float
    kappa: float
    band: float = 0.0
    crossings: List[Dict[str, Any]] = field(default_factory=list)
    band_entries: List[Dict[str, Any]] = field(default_factory=list)
    min_proximity: float = math.inf
    failed_traces: List[Dict[str, Any]] = field(default_factory=list)
    unmatched_endpoints: int = 0

    @property
    def parities(self) -> List[str]:
        return [row.parity for row in self.rows]

    @property
    def has_crossing(self) -> bool:
        return bool(self.crossings)

    @property
    def has_band_entry(self) -> bool:
        return bool(self.band_entries)

    def events(self) -> Dict[str, int]:
        """Count of trace endpoints per event label."""
        counts = {event.value: 0 for event in TraceEvent}
        for trace in self.traces:
            counts[trace.end_event.value] += 1
        return counts

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t": [row.t for row in self.rows],
            "count": [row.count for row in self.rows],
            "parity": self.parities,
            "max_size": [max(row.sizes) if row.sizes else float("nan") for row in self.rows],
            "min_sidelength": [min(row.sidelengths) if row.sidelengths else float("nan") for row in self.rows],
        })

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kappa": self.kappa,
            "threshold": self.threshold,
            "band": self.band,
            "rows": [
                {"t": row.t, "count": row.count, "parity": row.parity, "sizes": row.sizes, "sidelengths": row.sidelengths}
                for row in self.rows
            ],
            "events": self.events(),
            "crossings": self.crossings,
            "band_entries": self.band_entries,
            "min_proximity": self.min_proximity,
            "failed_traces": self.failed_traces,
            "unmatched_endpoints": self.unmatched_endpoints,
            "traces": [trace.to_dict() for trace in self.traces],
        }


def _sizes(h: Homotopy, t: float, squares: Sequence[SquareCandidate]) -> List[float]:
    corr = h.correspondence_at(t)
    sizes = []
    for square in squares:
        try:
            sizes.append(square_size(square, h.reference, corr))
        except OrientationError:
            sizes.append(float("nan"))
    return sizes


def _matches(square: SquareCandidate, others: Sequence[SquareCandidate], tol: float) -> bool:
    return any(square.vertex_distance(other) <= tol for other in others)


def scan_threshold(
    traces: Sequence[ContinuationTrace],
    threshold: float,
    band: float,
) -> Tuple[List[Dict[str, Any]], List[Dict[str, Any]], float]:
    """
    Flag sizes that cross ``threshold`` or come within ``band`` of it.

    A crossing is a sign change of size − threshold between consecutive
    samples. A band entry is the first sample of each run of samples with
    |size − threshold| < band. Samples whose size is nan are skipped.

    Returns:
        (crossings, band_entries, closest approach of any size)
    """
    crossings = []
    entries = []
    proximity = math.inf
    for index, trace in enumerate(traces):
        gaps = trace.sizes - threshold
        finite = np.isfinite(gaps)
        if np.any(finite):
            proximity = min(proximity, float(np.min(np.abs(gaps[finite]))))
        inside = finite & (np.abs(np.where(finite, gaps, np.inf)) < band)
        for k in range(len(gaps)):
            if inside[k] and (k == 0 or not inside[k - 1]):
                entries.append({"trace": index, "t": float(trace.samples[k].t), "kind": "band_entry"})
            if k + 1 < len(gaps) and finite[k] and finite[k + 1]:
                if gaps[k] * gaps[k + 1] <= 0 and gaps[k] != gaps[k + 1]:
                    crossings.append({"trace": index, "t": float(trace.samples[k + 1].t), "kind": "crossing"})
    return crossings, entries, proximity

def census(
    h: Homotopy,
    times: Sequence[float],
    config: Optional[SquareSearchConfig] = None,
    step: Optional[StepControl] = None,
    track: bool = True,
    workers: Optional[int] = None,
) -> CensusReport:
    """
    Square census of a homotopy.

    Args:
        h: Homotopy
        times: Slice times; must contain 0 and 1
        config: Square search settings for every slice
        step: Continuation step control
        track: Track the endpoint squares through the homotopy
        workers: Tracking threads

    Returns:
        CensusReport
    """
    times = sorted(set(float(t) for t in times))
    if not validate_times(times):
        raise ValidationError("Census times must lie in [0, 1] and include both 0 and 1")

    config = config or SquareSearchConfig.from_config()
    kappa = max_unsigned_curvature(h.reference)
    threshold = math.pi / (4.0 * kappa)

    rows: List[CensusRow] = []
    found: Dict[float, List[SquareCandidate]] = {}
    for t in times:
        squares = find_all_squares(h.curve_at(t), config)
        found[t] = squares
        rows.append(CensusRow(t, len(squares), _sizes(h, t, squares), [square.sidelength for square in squares]))
        logger.info(f"t={t:.4f}: {len(squares)} squares ({rows[-1].parity})")

    report = CensusReport(rows, [], threshold, kappa, VERIFY_CONFIG["band_factor"] / kappa)
    if not track:
        return report

    workers = workers or SEARCH_CONFIG["workers"]

    def run(job: Tuple[SquareCandidate, float, int]):
        square, t0, direction = job
        try:
            return track_square(h, square, step, t0, direction)
        except PathLostError as exc:
            return exc

    def collect(jobs: List[Tuple[SquareCandidate, float, int]]) -> List[ContinuationTrace]:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                outcomes = list(executor.map(run, jobs))
        else:
            outcomes = [run(job) for job in jobs]

        traces = []
        for (square, t0, _), outcome in zip(jobs, outcomes):
            if isinstance(outcome, PathLostError):
                report.failed_traces.append({"t0": t0, "params": square.params.tolist(), "message": str(outcome)})
            else:
                traces.append(outcome)
        return traces

    forward = collect([(square, 0.0, 1) for square in found[0.0]])

    final_squares = found[1.0]
    dedup_tol = config.resolved(h.end).dedup_tol
    arrived = [trace.final.square for trace in forward if trace.end_event is TraceEvent.REACHED_T1]
    report.unmatched_endpoints = sum(1 for square in arrived if not _matches(square, final_squares, dedup_tol))
    if report.unmatched_endpoints:
        logger.warning(f"{report.unmatched_endpoints} trace endpoints match no square of the final curve")

    backward = collect([
        (square, 1.0, -1) for square in final_squares if not _matches(square, arrived, dedup_tol)
    ])

    traces = forward + backward
    traces.sort(key=lambda trace: (trace.initial.t, float(np.min(trace.initial.square.params))))
    report.traces = traces
    report.crossings, report.band_entries, report.min_proximity = scan_threshold(traces, threshold, report.band)

    if report.crossings:
        logger.warning(f"{len(report.crossings)} size crossings of π/(4κ) = {threshold:.6g}")
    if report.band_entries:
        logger.warning(f"{len(report.band_entries)} band entries within {report.band:.3g} of π/(4κ)")
    logger.info(f"Census tracked {len(traces)} traces ({len(report.failed_traces)} lost)")
    return report
