"""
Continuation Module.

This module provides curve homotopies, continuation of inscribed squares
through them and square censuses along a homotopy.
"""

from .homotopy import (
    Homotopy,
    HomotopyKind,
    LinearHomotopy,
    TwoStepHomotopy,
    build_linear_homotopy,
    build_two_step_homotopy,
)
from .tracker import ContinuationTrace, StepControl, TraceEvent, TraceSample, track_square
from .census import CensusReport, CensusRow, census, scan_threshold

__all__ = [
    'Homotopy',
    'HomotopyKind',
    'LinearHomotopy',
    'TwoStepHomotopy',
    'build_linear_homotopy',
    'build_two_step_homotopy',
    'ContinuationTrace',
    'StepControl',
    'TraceEvent',
    'TraceSample',
    'track_square',
    'CensusReport',
    'CensusRow',
    'census',
    'scan_threshold',
]
