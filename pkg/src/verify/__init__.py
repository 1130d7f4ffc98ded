"""
Verify Module.

This module provides the quantitative checks behind the inscribed-square
argument, the end-to-end certification pipelines and the check suite runner.
"""

from .report import CheckReport, Verdict
from .checks import (
    check_arcsin_envelope,
    check_chord_bound,
    check_initial_size_bound,
    check_no_intermediate,
    check_small_square_bound,
    chord_gap,
    closeness_budget,
    combined_bound_check,
    corner_diagnostics,
    no_intermediate_self_test,
    small_square_bound,
    small_square_sweep,
)
from .main_theorem import (
    annulus_scenario,
    approximating_sequence,
    certify_main_theorem,
    peanut_demonstration,
    sequence_report,
)
from .suite import SuiteFile, SuiteResult, check_registry, load_suite, register_check, run_check, run_suite

__all__ = [
    'CheckReport',
    'Verdict',
    'check_arcsin_envelope',
    'check_chord_bound',
    'check_initial_size_bound',
    'check_no_intermediate',
    'check_small_square_bound',
    'chord_gap',
    'closeness_budget',
    'combined_bound_check',
    'corner_diagnostics',
    'no_intermediate_self_test',
    'small_square_bound',
    'small_square_sweep',
    'annulus_scenario',
    'approximating_sequence',
    'certify_main_theorem',
    'peanut_demonstration',
    'sequence_report',
    'SuiteFile',
    'SuiteResult',
    'check_registry',
    'load_suite',
    'register_check',
    'run_check',
    'run_suite',
]
