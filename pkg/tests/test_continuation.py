"""
Tests for continuation module.
"""

import math
import unittest
import sys
from pathlib import Path
from unittest.mock import patch

import numpy as np

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))
sys.path.insert(0, str(Path(__file__).parent.parent))

from config.config import VERIFY_CONFIG
from continuation.homotopy import HomotopyKind, TwoStepHomotopy, build_linear_homotopy, build_two_step_homotopy
from continuation.tracker import ContinuationTrace, StepControl, TraceEvent, TraceSample, track_square
from continuation.census import census, scan_threshold
from curves.factory import add_harmonic_wiggle, make_circle, make_ellipse, make_peanut, perturb_fourier
from size_metric.correspondence import ParamCorrespondence
from squares.finder import SquareSearchConfig, find_all_squares
from utils.errors import DisplacementBudgetExceededError
from utils.validators import ValidationError


class TestLinearHomotopy(unittest.TestCase):
    """Test coefficient-interpolation homotopies."""

    def setUp(self):
        """Set up test fixtures."""
        self.circle = make_circle(1.0)
        self.ellipse = make_ellipse(2.0, 1.0)

    def test_endpoints(self):
        """Test that the slices at 0 and 1 are the endpoint curves."""
        h = build_linear_homotopy(self.circle, self.ellipse)
        s = self.circle.grid(64)
        np.testing.assert_allclose(h.evaluate(s, 0.0), self.circle.eval(s), atol=1e-9)
        np.testing.assert_allclose(h.evaluate(s, 1.0), self.ellipse.eval(s), atol=1e-9)

    def test_ellipse_interpolation(self):
        """Test that interpolated ellipses stay ellipses."""
        h = build_linear_homotopy(self.circle, self.ellipse)
        self.assertEqual(h.retries, 0)
        s = self.circle.grid(64)
        np.testing.assert_allclose(h.curve_at(0.5).eval(s), make_ellipse(1.5, 1.0).eval(s), atol=1e-12)

    def test_constant_homotopy(self):
        """Test a homotopy from a curve to itself."""
        h = build_linear_homotopy(self.ellipse, self.ellipse)
        s = self.ellipse.grid(32)
        for t in (0.0, 0.3, 1.0):
            np.testing.assert_allclose(h.evaluate(s, t), self.ellipse.eval(s), atol=1e-12)
        np.testing.assert_array_equal(h.reference_params(s, 0.7), s)
        self.assertAlmostEqual(h.displacement(0.4), 0.0)

    def test_rotated_target(self):
        """Test interpolation towards a rotated copy."""
        h = build_linear_homotopy(self.ellipse, self.ellipse.transformed(math.pi / 2))
        self.assertTrue(h.is_regular())
        self.assertLessEqual(h.retries, 5)

    def test_to_dict(self):
        """Test the serialised form."""
        record = build_linear_homotopy(self.circle, self.ellipse).to_dict()
        self.assertEqual(record["kind"], HomotopyKind.FOURIER_LINEAR.value)
        self.assertEqual(record["retries"], 0)


class TestTwoStepHomotopy(unittest.TestCase):
    """Test the loop-extension homotopy."""

    def setUp(self):
        """Set up test fixtures."""
        self.beta = make_ellipse(2.0, 1.0)
        self.target = add_harmonic_wiggle(self.beta, 0.02, 3)
        self.f = ParamCorrespondence.from_projection(self.target, self.beta, ref="beta")

    def test_identity_is_constant(self):
        """Test that f = id on β itself gives P(s, t) = s."""
        identity = ParamCorrespondence.identity(self.beta)
        h = build_two_step_homotopy(self.beta, self.beta, identity)
        s = self.beta.grid(64)
        for t in (0.0, 0.25, 0.75, 1.0):
            np.testing.assert_allclose(h.reference_params(s, t), s, atol=1e-9)
            self.assertLess(h.displacement(t), 1e-6)

    def test_displacement_bound(self):
        """Test the displacement budget on a wiggled target."""
        h = build_two_step_homotopy(self.beta, self.target, self.f)
        self.assertAlmostEqual(h.eta, 0.05, delta=1e-6)
        s = self.beta.grid(128)
        np.testing.assert_array_equal(h.reference_params(s, 0.0), s)
        for t in np.linspace(0.0, 1.0, 11):
            self.assertLess(h.displacement(float(t)), h.eta)
        self.assertIs(h.curve_at(0.0), self.beta)
        self.assertIs(h.curve_at(1.0), self.target)

    def test_budget_exceeded(self):
        """Test that η below the actual displacement is rejected."""
        with self.assertRaises(DisplacementBudgetExceededError):
            build_two_step_homotopy(self.beta, self.target, self.f, eta=0.01)

    def test_degree_check(self):
        """Test that orientation-reversing correspondences are rejected."""
        reversed_f = ParamCorrespondence.from_arrays(self.beta, self.beta, -self.beta.grid(256))
        with self.assertRaises(ValidationError):
            TwoStepHomotopy(self.beta, self.beta, reversed_f, delta=0.01)


class TestTracker(unittest.TestCase):
    """Test square continuation."""

    def setUp(self):
        """Set up test fixtures."""
        self.ellipse = make_ellipse(2.0, 1.0)
        self.constant = build_linear_homotopy(self.ellipse, self.ellipse)
        self.square = find_all_squares(self.ellipse)[0]

    def test_constant_trace(self):
        """Test tracking through a constant homotopy."""
        trace = track_square(self.constant, self.square)
        self.assertEqual(trace.start_event, TraceEvent.REACHED_T0)
        self.assertEqual(trace.end_event, TraceEvent.REACHED_T1)
        self.assertEqual(trace.final.t, 1.0)
        self.assertTrue(trace.is_monotone())
        np.testing.assert_allclose(trace.sizes, trace.sizes[0], atol=1e-8)
        self.assertAlmostEqual(trace.final.square.vertex_distance(self.square), 0.0, places=8)

    def test_tracks_to_perturbed_curve(self):
        """Test that the tracked endpoint is a square of the final curve."""
        start = make_ellipse(1.5, 1.0)
        end = perturb_fourier(start, 0.02, 5, 7)
        h = build_linear_homotopy(start, end)
        trace = track_square(h, find_all_squares(start)[0])
        self.assertEqual(trace.end_event, TraceEvent.REACHED_T1)
        self.assertTrue(trace.is_monotone())

        distances = [trace.final.square.vertex_distance(square) for square in find_all_squares(end)]
        self.assertLess(min(distances), 1e-5)

    def test_backward_trace(self):
        """Test tracking from t = 1 towards t = 0."""
        trace = track_square(self.constant, self.square, t0=1.0, direction=-1)
        self.assertEqual(trace.start_event, TraceEvent.REACHED_T1)
        self.assertEqual(trace.end_event, TraceEvent.REACHED_T0)
        self.assertTrue(trace.is_monotone())

    def test_zero_square_threshold(self):
        """Test that a square below the zero threshold ends the trace."""
        trace = track_square(self.constant, self.square, StepControl(zero_factor=0.2))
        self.assertEqual(trace.end_event, TraceEvent.ZERO_SQUARE_DEATH)
        self.assertLess(trace.final.t, 1.0)

    def test_interior_start(self):
        """Test the event label of a trace started inside the interval."""
        trace = track_square(self.constant, self.square, t0=0.5)
        self.assertEqual(trace.start_event, TraceEvent.INTERIOR_START)
        self.assertEqual(trace.end_event, TraceEvent.REACHED_T1)
        self.assertEqual(trace.to_dict()["start_event"], "interior_start")

        backward = track_square(self.constant, self.square, t0=0.5, direction=-1)
        self.assertEqual(backward.start_event, TraceEvent.INTERIOR_START)
        self.assertEqual(backward.end_event, TraceEvent.REACHED_T0)

    def test_invalid_arguments(self):
        """Test argument validation."""
        with self.assertRaises(ValidationError):
            track_square(self.constant, self.square, direction=0)
        with self.assertRaises(ValidationError):
            track_square(self.constant, self.square, t0=1.5)

        circle_square = find_all_squares(make_circle(1.0))[0]
        with self.assertRaises(ValidationError):
            track_square(self.constant, circle_square)

    def test_trace_frame(self):
        """Test the tabular view of a trace."""
        trace = track_square(self.constant, self.square)
        frame = trace.to_frame()
        self.assertEqual(list(frame.columns), ["t", "size_wrt_p", "sidelength", "residual_norm"])
        self.assertEqual(len(frame), len(trace.samples))
        self.assertEqual(trace.to_dict()["end_event"], "reached_t1")


class TestCensus(unittest.TestCase):
    """Test square censuses."""

    def setUp(self):
        """Set up test fixtures."""
        self.ellipse = make_ellipse(2.0, 1.0)

    def test_constant_census(self):
        """Test the census of a constant ellipse family."""
        report = census(build_linear_homotopy(self.ellipse, self.ellipse), [0.0, 0.5, 1.0])
        self.assertEqual([row.count for row in report.rows], [1, 1, 1])
        self.assertEqual(report.parities, ["odd", "odd", "odd"])
        self.assertEqual(len(report.traces), 1)
        self.assertEqual(report.events()["reached_t1"], 1)
        self.assertEqual(report.unmatched_endpoints, 0)
        self.assertFalse(report.has_crossing)
        self.assertFalse(report.has_band_entry)
        self.assertAlmostEqual(report.threshold, math.pi / 8)
        self.assertAlmostEqual(report.band, VERIFY_CONFIG["band_factor"] / 2.0)
        self.assertGreater(report.min_proximity, 0.0)

    def test_parity_preserved(self):
        """Test that both ends of a generic family have odd counts."""
        start = make_ellipse(1.5, 1.0)
        h = build_linear_homotopy(start, perturb_fourier(start, 0.02, 5, 7))
        report = census(h, [0.0, 1.0])
        self.assertEqual(report.parities, ["odd", "odd"])
        self.assertEqual(report.unmatched_endpoints, 0)
        self.assertEqual(report.failed_traces, [])

    def test_without_tracking(self):
        """Test a count-only census."""
        report = census(build_linear_homotopy(self.ellipse, self.ellipse), [1.0, 0.0], track=False)
        self.assertEqual([row.t for row in report.rows], [0.0, 1.0])
        self.assertEqual(report.traces, [])
        self.assertEqual(list(report.to_frame().columns), ["t", "count", "parity", "max_size", "min_sidelength"])

    def test_invalid_times(self):
        """Test that the schedule must include both endpoints."""
        with self.assertRaises(ValidationError):
            census(build_linear_homotopy(self.ellipse, self.ellipse), [0.0, 0.5])

    def test_band_entry_flagged(self):
        """Test that sizes inside a wide band are flagged without a crossing."""
        with patch.dict(VERIFY_CONFIG, {"band_factor": 100.0}):
            report = census(build_linear_homotopy(self.ellipse, self.ellipse), [0.0, 1.0])
        self.assertTrue(report.has_band_entry)
        self.assertFalse(report.has_crossing)
        self.assertEqual(report.band_entries, [{"trace": 0, "t": 0.0, "kind": "band_entry"}])
        self.assertEqual(report.to_dict()["band_entries"], report.band_entries)


class TestThresholdScan(unittest.TestCase):
    """Test crossing and band-entry flags on hand-built traces."""

    def setUp(self):
        """Set up test fixtures."""
        self.square = find_all_squares(make_ellipse(2.0, 1.0))[0]

    def _trace(self, sizes):
        times = np.linspace(0.0, 1.0, len(sizes))
        samples = [TraceSample(float(t), self.square, float(size)) for t, size in zip(times, sizes)]
        return ContinuationTrace(samples, TraceEvent.REACHED_T0, TraceEvent.REACHED_T1)

    def test_band_entry_without_crossing(self):
        """Test a size that dips into the band and leaves on the same side."""
        crossings, entries, proximity = scan_threshold([self._trace([1.5, 1.2, 1.005, 1.3])], 1.0, 0.01)
        self.assertEqual(crossings, [])
        self.assertEqual(len(entries), 1)
        self.assertEqual(entries[0]["kind"], "band_entry")
        self.assertAlmostEqual(entries[0]["t"], 2.0 / 3.0)
        self.assertAlmostEqual(proximity, 0.005)

    def test_crossing_outside_band(self):
        """Test a sign change between samples that both lie outside the band."""
        crossings, entries, _ = scan_threshold([self._trace([1.5, 0.5])], 1.0, 0.01)
        self.assertEqual(crossings, [{"trace": 0, "t": 1.0, "kind": "crossing"}])
        self.assertEqual(entries, [])

    def test_one_entry_per_run(self):
        """Test that consecutive samples in the band count as one entry."""
        traces = [self._trace([2.0, 2.0]), self._trace([1.5, 1.004, 0.996, 1.3])]
        crossings, entries, _ = scan_threshold(traces, 1.0, 0.01)
        self.assertEqual([entry["trace"] for entry in entries], [1])
        self.assertAlmostEqual(entries[0]["t"], 1.0 / 3.0)
        self.assertEqual(len(crossings), 2)

    def test_nan_sizes_skipped(self):
        """Test that nan sizes neither cross nor enter."""
        crossings, entries, proximity = scan_threshold([self._trace([float("nan"), 1.001])], 1.0, 0.01)
        self.assertEqual(crossings, [])
        self.assertEqual([entry["t"] for entry in entries], [1.0])
        self.assertAlmostEqual(proximity, 0.001)


class TestTraceEvents(unittest.TestCase):
    """Test events produced by families that pinch or create squares."""

    def test_pinched_waist(self):
        """Test that narrowing the peanut waist through zero kills the neck square."""
        start = make_peanut(0.2)
        h = build_linear_homotopy(start, make_peanut(-0.2))
        neck = min(find_all_squares(start, SquareSearchConfig(grid_n=512)), key=lambda square: square.sidelength)
        self.assertLess(neck.sidelength, 0.25)

        trace = track_square(h, neck, StepControl(initial_step=0.002, max_step=0.002))
        self.assertEqual(trace.start_event, TraceEvent.REACHED_T0)
        self.assertEqual(trace.end_event, TraceEvent.ZERO_SQUARE_DEATH)
        zero_threshold = StepControl().zero_factor * h.reference.total_length
        self.assertLessEqual(trace.final.square.sidelength, zero_threshold)
        self.assertGreater(trace.final.t, 0.45)
        self.assertLess(trace.final.t, 0.5)
        self.assertTrue(np.all(np.diff(trace.sidelengths[-10:]) < 0))

    def test_fold_pair(self):
        """Test that squares created along the family end at a shared fold."""
        start = make_ellipse(2.0, 1.0)
        end = perturb_fourier(make_peanut(0.3), 0.02, 4, 3)
        h = build_linear_homotopy(start, end)
        report = census(
            h, [0.0, 1.0], SquareSearchConfig(grid_n=256), StepControl(initial_step=0.01, max_step=0.01)
        )
        self.assertEqual(report.rows[0].count, 1)
        self.assertGreaterEqual(report.rows[1].count, 3)
        self.assertEqual(report.parities, ["odd", "odd"])

        folds = [trace for trace in report.traces if trace.end_event in (TraceEvent.FOLD_MERGE, TraceEvent.FOLD_SPLIT)]
        self.assertGreaterEqual(len(folds), 2)
        for trace in folds:
            self.assertIsNotNone(trace.fold_partner)
            self.assertGreater(trace.fold_t, 0.0)
            self.assertLess(trace.fold_t, 1.0)

        paired = [
            (first, second) for i, first in enumerate(folds) for second in folds[i + 1:]
            if abs(first.fold_t - second.fold_t) < 0.02
        ]
        self.assertTrue(paired)
        self.assertGreater(report.events()["fold_split"], 0)


if __name__ == '__main__':
    unittest.main()
