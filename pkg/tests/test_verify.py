"""
Tests for verify module.
"""

import math
import tempfile
import unittest
import sys
from pathlib import Path

import numpy as np

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))
sys.path.insert(0, str(Path(__file__).parent.parent))

from cli_io.curve_io import write_curve
from cli_io.scenarios import noisy_polyline, annulus_star
from curves.analysis import analyze_curve
from curves.factory import make_circle, make_ellipse, perturb_fourier
from curves.polyline import PolylineCurve, regular_polygon, sample_polyline
from size_metric.correspondence import ParamCorrespondence
from squares.candidate import SquareCandidate
from squares.finder import find_all_squares
from utils.validators import ValidationError
from verify.report import CheckReport, Verdict
from verify.checks import (
    check_arcsin_envelope, check_chord_bound, check_initial_size_bound, check_no_intermediate,
    check_small_square_bound, chord_gap, closeness_budget, combined_bound_check, corner_diagnostics,
    no_intermediate_self_test, small_square_bound, small_square_sweep
)
from verify.main_theorem import (
    annulus_scenario, approximating_sequence, certify_main_theorem, peanut_demonstration, sequence_report
)
from verify.suite import check_registry, load_suite, run_check, run_suite

REPO_ROOT = Path(__file__).parent.parent


class TestCheckReport(unittest.TestCase):
    """Test report construction."""

    def test_verdict_from_margin(self):
        """Test that holds means margin ≥ −tolerance."""
        self.assertEqual(CheckReport.from_margin("x", {}, 0.5).verdict, Verdict.HOLDS)
        self.assertEqual(CheckReport.from_margin("x", {}, -5e-7).verdict, Verdict.HOLDS)
        self.assertEqual(CheckReport.from_margin("x", {}, -5e-7, tolerance=0.0).verdict, Verdict.VIOLATED)
        self.assertTrue(CheckReport.from_margin("x", {}, -1.0).violated)

    def test_inapplicable(self):
        """Test inapplicable reports."""
        report = CheckReport.inapplicable("x", {"kappa": 1.0}, "hypothesis fails")
        self.assertEqual(report.verdict, Verdict.INAPPLICABLE)
        self.assertTrue(math.isnan(report.margin))
        self.assertFalse(report.holds or report.violated)
        self.assertEqual(report.notes, ["hypothesis fails"])

    def test_to_dict(self):
        """Test serialisation with candidate witnesses."""
        square = find_all_squares(make_ellipse(2.0, 1.0))[0]
        data = CheckReport.from_margin("x", {"a": 1.0}, 0.1, witnesses=[square, {"x": 0.5}]).to_dict()
        self.assertEqual(data["verdict"], "holds")
        self.assertEqual(len(data["witnesses"][0]["vertices"]), 4)
        self.assertEqual(data["witnesses"][1], {"x": 0.5})


class TestConstants(unittest.TestCase):
    """Test the arithmetic behind the bounds."""

    def test_self_test(self):
        """Test 1 − 16√2/(10π) > 1/4."""
        self.assertAlmostEqual(no_intermediate_self_test(), 0.27975, places=5)
        self.assertGreater(no_intermediate_self_test(), 0.25)

    def test_small_square_bound(self):
        """Test √2/(5κ) + √2ρ."""
        self.assertAlmostEqual(small_square_bound(1.0, 0.0), 0.282843, places=6)
        self.assertAlmostEqual(small_square_bound(2.0, 0.1), math.sqrt(2) / 10 + math.sqrt(2) / 10)
        self.assertAlmostEqual(closeness_budget(2.0), 0.05)

    def test_combined_bound(self):
        """Test √2/(5κ) + 1/(100κ) < π/(4κ)."""
        report = combined_bound_check(1.0)
        self.assertTrue(report.holds)
        self.assertAlmostEqual(report.hypothesis_values["small_square_bound"], 0.29284, places=5)
        self.assertAlmostEqual(report.hypothesis_values["threshold"], 0.78540, places=5)

        scaled = combined_bound_check(4.0)
        self.assertAlmostEqual(scaled.margin, report.margin / 4.0)

        with self.assertRaises(ValidationError):
            combined_bound_check(0.0)

    def test_arcsin_envelope(self):
        """Test arcsin(x) ≤ πx/2 on [0, 1]."""
        report = check_arcsin_envelope(1001)
        self.assertTrue(report.holds)
        self.assertGreaterEqual(report.margin, -1e-15)


class TestInitialSizeBound(unittest.TestCase):
    """Test the initial size bound check."""

    def test_circle(self):
        """Test the unit circle: size 3π/2 against π."""
        report = check_initial_size_bound(make_circle(1.0))
        self.assertTrue(report.holds)
        self.assertAlmostEqual(report.hypothesis_values["bound"], math.pi, places=6)
        self.assertAlmostEqual(report.margin, math.pi / 2, places=6)

    def test_ellipse(self):
        """Test the 2:1 ellipse against π/2."""
        report = check_initial_size_bound(make_ellipse(2.0, 1.0))
        self.assertTrue(report.holds)
        self.assertAlmostEqual(report.hypothesis_values["bound"], math.pi / 2, places=6)
        self.assertEqual(report.hypothesis_values["square_count"], 1)

    def test_perturbed(self):
        """Test a perturbed ellipse."""
        report = check_initial_size_bound(perturb_fourier(make_ellipse(2.0, 1.0), 0.01, 6, 5))
        self.assertTrue(report.holds)
        self.assertEqual(len(report.diagnostics["sizes"]), report.hypothesis_values["square_count"])


class TestChordBound(unittest.TestCase):
    """Test the chord bound check."""

    def test_circle_quarter_arc(self):
        """Test a π/4 arc of the unit circle."""
        chords, bounds = chord_gap(analyze_curve(make_circle(1.0)), np.array([0.3]), np.array([math.pi / 4]))
        self.assertAlmostEqual(float(chords[0]), 0.765367, places=6)
        self.assertAlmostEqual(float(bounds[0]), 0.555360, places=6)

    def test_scale_invariance(self):
        """Test that the relative gap at ℓ = π/(4κ) does not depend on κ."""
        ratios = []
        for radius in (0.5, 1.0, 3.0):
            length = math.pi * radius / 4
            chords, bounds = chord_gap(analyze_curve(make_circle(radius)), np.array([0.0]), np.array([length]))
            ratios.append(float(chords[0] - bounds[0]) / length)
        np.testing.assert_allclose(ratios, ratios[0], rtol=1e-6)
        self.assertGreater(ratios[0], 0.0)

    def test_random_arcs(self):
        """Test random arcs on smooth curves."""
        for curve in (make_circle(1.0), make_ellipse(2.0, 1.0)):
            report = check_chord_bound(curve, trials=2000, seed=1)
            self.assertTrue(report.holds)
            self.assertEqual(report.hypothesis_values["trials"], 2000)

    def test_polyline_inapplicable(self):
        """Test that polygons have no curvature bound."""
        report = check_chord_bound(regular_polygon(6))
        self.assertEqual(report.verdict, Verdict.INAPPLICABLE)


class TestNoIntermediate(unittest.TestCase):
    """Test the no-intermediate-square check."""

    def setUp(self):
        """Set up test fixtures."""
        self.beta = make_ellipse(2.0, 1.0)

    def test_identity(self):
        """Test the reference curve against itself."""
        report = check_no_intermediate(self.beta, self.beta, ParamCorrespondence.identity(self.beta))
        self.assertTrue(report.holds)
        self.assertAlmostEqual(report.hypothesis_values["threshold"], math.pi / 8, places=6)
        self.assertTrue(report.diagnostics["self_test_exceeds_quarter"])
        self.assertGreater(report.hypothesis_values["closest_size"], math.pi / 8)

    def test_perturbed(self):
        """Test a nearby curve measured through the projection."""
        alpha = perturb_fourier(self.beta, 0.005, 4, 3)
        f = ParamCorrespondence.from_projection(alpha, self.beta, strict=False)
        report = check_no_intermediate(alpha, self.beta, f)
        self.assertTrue(report.holds)

    def test_displacement_too_large(self):
        """Test that a shifted curve is outside the hypothesis."""
        alpha = make_ellipse(2.0, 1.0, center=(0.2, 0.0))
        f = ParamCorrespondence.from_arrays(alpha, self.beta, alpha.grid(512))
        report = check_no_intermediate(alpha, self.beta, f)
        self.assertEqual(report.verdict, Verdict.INAPPLICABLE)

    def test_corner_diagnostics(self):
        """Test the turning argument on the ellipse square."""
        square = find_all_squares(self.beta)[0]
        info = corner_diagnostics(square, self.beta, ParamCorrespondence.identity(self.beta), 2.0, 0.05)
        self.assertAlmostEqual(info["theta"], math.pi / 2, places=6)
        self.assertAlmostEqual(info["phi"], math.pi / 2, places=6)
        self.assertAlmostEqual(info["turning_required"], math.pi, places=6)
        self.assertGreater(info["turning_available"], info["turning_required"])
        self.assertGreaterEqual(info["beta_chord"], 0.0)


class TestSmallSquareBound(unittest.TestCase):
    """Test the small-square bound check."""

    def setUp(self):
        """Set up test fixtures."""
        self.beta = make_ellipse(2.0, 1.0)
        self.alpha = perturb_fourier(self.beta, 0.005, 4, 3)
        self.f = ParamCorrespondence.from_projection(self.alpha, self.beta, strict=False)

    def test_sweep_holds(self):
        """Test every square of a nearby curve."""
        report = small_square_sweep(self.alpha, self.beta, self.f)
        self.assertTrue(report.holds)
        self.assertIn("margins", report.diagnostics)

    def test_clustered_quadruple(self):
        """Test a nearly degenerate quadrilateral of small size."""
        tiny = SquareCandidate.from_params(self.alpha, [1.0, 1.001, 1.002, 1.003])
        report = check_small_square_bound(self.alpha, self.beta, self.f, tiny)
        self.assertTrue(report.holds)
        self.assertLess(report.hypothesis_values["rho"], 0.01)

    def test_inapplicable(self):
        """Test the displacement hypothesis."""
        alpha = make_ellipse(2.0, 1.0, center=(0.2, 0.0))
        f = ParamCorrespondence.from_arrays(alpha, self.beta, alpha.grid(512))
        report = small_square_sweep(alpha, self.beta, f)
        self.assertEqual(report.verdict, Verdict.INAPPLICABLE)


class TestMainTheorem(unittest.TestCase):
    """Test the certification pipelines."""

    def setUp(self):
        """Set up test fixtures."""
        self.gamma = make_ellipse(2.0, 1.0)

    def test_fine_sampling(self):
        """Test a polygon inscribed in the smooth curve."""
        report = certify_main_theorem(self.gamma, sample_polyline(self.gamma, 200))
        self.assertTrue(report.holds)
        self.assertEqual(report.hypothesis_values["degree"], 1)
        self.assertAlmostEqual(report.witnesses[0].sidelength, 4 / math.sqrt(5), places=2)

    def test_noisy_polygon(self):
        """Test a 400-gon with radial noise."""
        beta = noisy_polyline(self.gamma, 400, 0.02, 9)
        report = certify_main_theorem(self.gamma, beta)
        self.assertTrue(report.holds)
        self.assertLess(report.hypothesis_values["displacement"], 0.05)
        self.assertGreater(report.hypothesis_values["square_count"], 0)

    def test_double_winding(self):
        """Test a polygon that winds twice."""
        twice = PolylineCurve(self.gamma.eval(2.0 * self.gamma.grid(101)))
        report = certify_main_theorem(self.gamma, twice)
        self.assertEqual(report.verdict, Verdict.INAPPLICABLE)
        self.assertEqual(report.hypothesis_values["degree"], 2)

    def test_far_polygon(self):
        """Test a polygon outside the closeness budget."""
        report = certify_main_theorem(self.gamma, sample_polyline(make_ellipse(2.3, 1.3), 100))
        self.assertEqual(report.verdict, Verdict.INAPPLICABLE)

    def test_annulus_circle(self):
        """Test a circle polygon between radii 1 and 2."""
        report = annulus_scenario(1.0, 2.0, regular_polygon(200, 1.5))
        self.assertTrue(report.holds)
        self.assertEqual(report.hypothesis_values["winding"], 1)
        self.assertAlmostEqual(report.hypothesis_values["sidelength"], 1.5 * math.sqrt(2), places=3)

    def test_annulus_ratio(self):
        """Test that R > (1 + √2)r fails the hypotheses."""
        report = annulus_scenario(1.0, 2.5, regular_polygon(200, 1.5))
        self.assertEqual(report.verdict, Verdict.INAPPLICABLE)
        self.assertFalse(report.diagnostics["ratio_ok"])

    def test_annulus_star(self):
        """Test a star-shaped polygon inside the annulus."""
        report = annulus_scenario(1.0, 2.2, annulus_star(1.0, 2.2, 200, 5, 4))
        self.assertTrue(report.diagnostics["contained"])
        self.assertTrue(report.holds)

    def test_annulus_radii(self):
        """Test radius validation."""
        with self.assertRaises(ValidationError):
            annulus_scenario(2.0, 1.0, regular_polygon(8))

    def test_approximating_sequence(self):
        """Test smooth approximations of a polygon."""
        beta = sample_polyline(self.gamma, 64)
        curves = approximating_sequence(beta, (8, 16))
        self.assertEqual([curve.harmonics for curve in curves], [8, 16])

        frame = sequence_report(beta, (8, 16), gamma=self.gamma)
        self.assertEqual(len(frame), 2)
        self.assertIn("max_size_wrt_f", frame.columns)
        self.assertTrue((frame["distance"] < 0.1).all())

    def test_peanut(self):
        """Test that the waist square is small but large in size."""
        report = peanut_demonstration(0.1)
        self.assertTrue(report.holds)
        kappa = report.hypothesis_values["kappa"]
        self.assertLess(report.witnesses[0].sidelength, 1.0 / kappa)
        self.assertGreaterEqual(report.hypothesis_values["size"], math.pi / kappa)


class TestSuite(unittest.TestCase):
    """Test the check registry and suite runner."""

    def test_registry(self):
        """Test that every check is registered."""
        expected = {
            "initial_size_bound", "chord_bound", "no_intermediate", "small_square_bound", "main_theorem",
            "annulus", "peanut", "arcsin_envelope", "combined_bound",
        }
        self.assertTrue(expected.issubset(set(check_registry.list_keys())))
        self.assertEqual(check_registry.get("no_intermediate").arity, 2)

    def test_run_check(self):
        """Test running a check by name."""
        self.assertTrue(run_check("combined_bound", kappa=2.0).holds)
        with self.assertRaises(KeyError):
            run_check("missing")
        with self.assertRaises(ValidationError):
            run_check("chord_bound")
        with self.assertRaises(ValidationError):
            run_check("combined_bound", unknown=1)

    def test_run_suite(self):
        """Test a small inline suite."""
        suite = {
            "name": "small",
            "checks": [
                {"check": "arcsin_envelope"},
                {"check": "combined_bound", "label": "kappa_two", "options": {"kappa": 2.0}},
                {"check": "initial_size_bound", "curves": [{"scenario": {"kind": "ellipse"}}]},
            ],
        }
        result = run_suite(suite, workers=2)
        self.assertEqual(result.labels, ["arcsin_envelope", "kappa_two", "initial_size_bound"])
        self.assertFalse(result.violated)
        self.assertEqual(result.errors, [])
        self.assertEqual(list(result.to_frame()["verdict"]), ["holds", "holds", "holds"])
        self.assertEqual(result.to_dict()["reports"][1]["label"], "kappa_two")

    def test_curve_paths(self):
        """Test suite inputs read from curve files."""
        with tempfile.TemporaryDirectory() as tmp:
            write_curve(make_circle(1.0), Path(tmp) / "circle.json")
            suite = {"checks": [{"check": "chord_bound", "curves": [{"path": "circle.json"}], "options": {"trials": 500}}]}
            result = run_suite(suite, base_dir=Path(tmp))
        self.assertTrue(result.reports[0].holds)

    def test_invalid_suites(self):
        """Test suite schema errors."""
        with self.assertRaises(ValidationError):
            load_suite({"name": "empty"})
        with self.assertRaises(ValidationError):
            load_suite({"checks": [{"check": "peanut", "curves": [{"path": "a.json", "scenario": {"kind": "circle"}}]}]})
        with self.assertRaises(KeyError):
            run_suite({"checks": [{"check": "nonexistent"}]})

    def test_default_suite_parses(self):
        """Test the shipped suite file."""
        suite = load_suite(REPO_ROOT / "config" / "default_suite.yaml")
        self.assertEqual(suite.name, "default")
        self.assertEqual(len(suite.checks), 11)
        for entry in suite.checks:
            self.assertIn(entry.check, check_registry)


if __name__ == '__main__':
    unittest.main()
