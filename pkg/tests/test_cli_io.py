"""
Tests for cli_io module.
"""

import contextlib
import io
import json
import math
import tempfile
import unittest
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
from pydantic import ValidationError as SchemaError

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))
sys.path.insert(0, str(Path(__file__).parent.parent))

from cli_io.cli import EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK, EXIT_VIOLATED, main
from cli_io.curve_io import (
    counterclockwise, curve_to_json, load_homotopy, parse_curve, read_curve, write_curve
)
from cli_io.scenarios import ScenarioKind, ScenarioSpec, annulus_star, generate, generate_curves, noisy_polyline
from cli_io.svg import render_svg, write_frames
from continuation.homotopy import LinearHomotopy, TwoStepHomotopy, build_linear_homotopy
from continuation.tracker import track_square
from curves.factory import add_harmonic_wiggle, make_ellipse
from curves.fourier import FourierCurve
from curves.polyline import PolylineCurve, polygon_area, regular_polygon
from squares.finder import find_all_squares
from utils.errors import NumericalError
from utils.validators import CurveFormatError
from verify.report import CheckReport
from verify.suite import register_check


def _count(svg_text: str, prefix: str) -> int:
    root = ET.fromstring(svg_text.encode("utf-8"))
    return sum(1 for element in root.iter() if element.get("id", "").startswith(prefix))


@register_check("always_violated", 0, "Fails on purpose")
def _always_violated(curves, config):
    return CheckReport.from_margin("always_violated", {}, -1.0)


@register_check("always_unstable", 0, "Raises a numerical failure")
def _always_unstable(curves, config):
    raise NumericalError("no convergence")


class TestCurveFiles(unittest.TestCase):
    """Test curve file reading and writing."""

    def setUp(self):
        """Set up test fixtures."""
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.ellipse = make_ellipse(2.0, 1.0)

    def tearDown(self):
        self.tmp.cleanup()

    def test_fourier_file(self):
        """Test writing and reading a Fourier curve file."""
        path = write_curve(self.ellipse, self.dir / "nested" / "ellipse.json")
        self.assertTrue(path.exists())

        curve = read_curve(path)
        self.assertIsInstance(curve, FourierCurve)
        np.testing.assert_allclose(curve.coefficients, self.ellipse.coefficients)
        self.assertEqual(json.loads(path.read_text())["type"], "fourier")

    def test_polyline_file(self):
        """Test writing and reading a polygon file."""
        polygon = regular_polygon(12, 1.5)
        curve = read_curve(write_curve(polygon, self.dir / "polygon.json"))
        self.assertIsInstance(curve, PolylineCurve)
        np.testing.assert_allclose(curve.vertices, polygon.vertices)

    def test_deterministic_text(self):
        """Test that the file text depends only on the curve."""
        self.assertEqual(curve_to_json(self.ellipse), curve_to_json(make_ellipse(2.0, 1.0)))

    def test_parse_errors(self):
        """Test rejection of malformed curve data."""
        bad = [
            {"type": "spline", "points": [[0, 0], [1, 0], [0, 1]]},
            {"type": "fourier", "coeffs": [[0, 0, 0], [1, 0, 0]]},
            {"type": "polyline", "points": [[0, 0], [1, 0]]},
            {"coeffs": [[0, 0, 0, 0], [1, 0, 0, 1]]},
        ]
        for data in bad:
            with self.assertRaises(CurveFormatError):
                parse_curve(data)

    def test_bad_files(self):
        """Test files that are not curve objects."""
        broken = self.dir / "broken.json"
        broken.write_text("{not json")
        with self.assertRaises(CurveFormatError):
            read_curve(broken)

        binary = self.dir / "binary.json"
        binary.write_bytes(b"\xff\xfe\x00\x81")
        with self.assertRaises(CurveFormatError):
            read_curve(binary)

        listing = self.dir / "list.json"
        listing.write_text("[1, 2, 3]")
        with self.assertRaises(CurveFormatError):
            read_curve(listing)

    def test_counterclockwise(self):
        """Test that clockwise curves are reversed only on request."""
        clockwise = PolylineCurve(regular_polygon(8).vertices[::-1].copy(), jordan=True)
        self.assertLess(polygon_area(clockwise.vertices), 0.0)
        self.assertGreater(polygon_area(counterclockwise(clockwise).vertices), 0.0)

        path = write_curve(clockwise, self.dir / "cw.json")
        self.assertLess(polygon_area(read_curve(path).vertices), 0.0)
        self.assertGreater(polygon_area(read_curve(path, normalize=True).vertices), 0.0)

        table = np.array(self.ellipse.coefficients)
        table[:, 2:] *= -1.0
        reversed_ellipse = counterclockwise(FourierCurve(table))
        self.assertGreater(polygon_area(reversed_ellipse.samples(256)), 0.0)
        self.assertAlmostEqual(polygon_area(reversed_ellipse.samples(256)), math.pi * 2.0, places=2)

    def test_counterclockwise_noop(self):
        """Test that counterclockwise curves are returned unchanged."""
        self.assertIs(counterclockwise(self.ellipse), self.ellipse)


class TestHomotopyFiles(unittest.TestCase):
    """Test homotopy spec files."""

    def setUp(self):
        """Set up test fixtures."""
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.start = make_ellipse(2.0, 1.0)
        write_curve(self.start, self.dir / "start.json")
        write_curve(add_harmonic_wiggle(self.start, 0.02, 3), self.dir / "end.json")

    def tearDown(self):
        self.tmp.cleanup()

    def _spec(self, text: str) -> Path:
        path = self.dir / "homotopy.yaml"
        path.write_text(text)
        return path

    def test_linear_spec(self):
        """Test loading a coefficient-interpolation homotopy."""
        h = load_homotopy(self._spec("kind: fourier_linear\nstart: start.json\nend: end.json\n"))
        self.assertIsInstance(h, LinearHomotopy)

    def test_two_step_spec(self):
        """Test loading a loop-extension homotopy."""
        h = load_homotopy(self._spec("kind: two_step\nstart: start.json\nend: end.json\n"))
        self.assertIsInstance(h, TwoStepHomotopy)
        self.assertLess(h.displacement(1.0), h.eta)

    def test_invalid_specs(self):
        """Test malformed homotopy specs."""
        with self.assertRaises(CurveFormatError):
            load_homotopy(self._spec("kind: fourier_linear\nstart: start.json\n"))
        with self.assertRaises(CurveFormatError):
            load_homotopy(self._spec("kind: spiral\nstart: start.json\nend: end.json\n"))

        write_curve(regular_polygon(20), self.dir / "polygon.json")
        with self.assertRaises(CurveFormatError):
            load_homotopy(self._spec("start: start.json\nend: polygon.json\n"))


class TestScenarios(unittest.TestCase):
    """Test scenario generation."""

    def setUp(self):
        """Set up test fixtures."""
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_deterministic_files(self):
        """Test that identical specs write identical files."""
        texts = []
        for sub in ("first", "second"):
            spec = ScenarioSpec(kind=ScenarioKind.PERTURBED_ELLIPSE, name="p", seed=5, output_dir=str(self.dir / sub))
            (path,) = generate(spec)
            texts.append(path.read_bytes())
        self.assertEqual(texts[0], texts[1])

    def test_ensemble_names(self):
        """Test the file stems of a perturbed ensemble."""
        spec = ScenarioSpec(kind=ScenarioKind.PERTURBED_ENSEMBLE, name="ens", count=3)
        stems = [stem for stem, _ in generate_curves(spec)]
        self.assertEqual(len(stems), 3)
        self.assertEqual(len(set(stems)), 3)
        for stem in stems:
            self.assertRegex(stem, r"^ens_\d{3}$")

    def test_noisy_polyline(self):
        """Test seeded polygon noise."""
        base = make_ellipse(2.0, 1.0)
        first = noisy_polyline(base, 100, 0.02, 3)
        self.assertEqual(first.vertices.shape, (100, 2))
        np.testing.assert_array_equal(first.vertices, noisy_polyline(base, 100, 0.02, 3).vertices)
        self.assertFalse(np.array_equal(first.vertices, noisy_polyline(base, 100, 0.02, 4).vertices))
        self.assertLessEqual(float(np.max(np.abs(first.vertices - base.eval(base.grid(100))))), 0.02 + 1e-12)

    def test_annulus_star(self):
        """Test that the star stays inside its annulus."""
        star = annulus_star(1.0, 2.2, 300, 5, 2)
        radii = np.hypot(star.vertices[:, 0], star.vertices[:, 1])
        self.assertGreater(float(radii.min()), 1.0)
        self.assertLess(float(radii.max()), 2.2)

    def test_invalid_spec(self):
        """Test scenario validation."""
        with self.assertRaises(SchemaError):
            ScenarioSpec(kind=ScenarioKind.ANNULUS_STAR, inner_radius=2.0, outer_radius=1.0)
        with self.assertRaises(SchemaError):
            ScenarioSpec(kind="hexagon")


class TestSvg(unittest.TestCase):
    """Test SVG rendering."""

    def setUp(self):
        """Set up test fixtures."""
        self.ellipse = make_ellipse(2.0, 1.0)
        self.squares = find_all_squares(self.ellipse)

    def test_curve_and_square(self):
        """Test the elements of a rendered picture."""
        text = render_svg(self.ellipse, self.squares, ["ellipse"], [1.0])
        self.assertTrue(text.startswith("<?xml"))
        self.assertEqual(_count(text, "curve-"), 1)
        self.assertEqual(_count(text, "square-"), 1)
        self.assertEqual(_count(text, "label-"), 1)
        self.assertEqual(_count(text, "annotation-"), 1)
        self.assertIn("side ", text)
        self.assertIn("size 1.000000", text)

    def test_no_squares(self):
        """Test a curve without squares."""
        text = render_svg([self.ellipse, regular_polygon(6)])
        self.assertEqual(_count(text, "curve-"), 2)
        self.assertEqual(_count(text, "square-"), 0)
        self.assertEqual(_count(text, "label-"), 0)

    def test_deterministic(self):
        """Test that rendering is repeatable."""
        first = render_svg(self.ellipse, self.squares)
        self.assertEqual(first, render_svg(self.ellipse, self.squares))
        self.assertNotIn("dc:date", first)

    def test_frames(self):
        """Test one frame per continuation sample."""
        h = build_linear_homotopy(self.ellipse, self.ellipse)
        trace = track_square(h, self.squares[0])
        with tempfile.TemporaryDirectory() as tmp:
            paths = write_frames(h, trace.samples, tmp, prefix="run")
            self.assertEqual(len(paths), len(trace.samples))
            self.assertEqual(paths[0].name, "run_0000.svg")
            self.assertTrue(all(path.exists() for path in paths))


class TestCli(unittest.TestCase):
    """Test the command-line entry point."""

    def setUp(self):
        """Set up test fixtures."""
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.ellipse_path = str(write_curve(make_ellipse(2.0, 1.0), self.dir / "ellipse.json"))

    def tearDown(self):
        self.tmp.cleanup()

    def _run(self, *argv):
        out = io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
            code = main(list(argv))
        return code, out.getvalue()

    def test_analyze(self):
        """Test the analysis command."""
        code, out = self._run("analyze", self.ellipse_path, "--json")
        self.assertEqual(code, EXIT_OK)
        payload = json.loads(out)
        self.assertEqual(payload["kind"], "fourier")
        self.assertTrue(payload["simple"])
        self.assertAlmostEqual(payload["max_unsigned_curvature"], 2.0, places=6)

    def test_find_squares(self):
        """Test the square search command with a picture."""
        svg_path = self.dir / "out" / "squares.svg"
        code, out = self._run("find-squares", self.ellipse_path, "--json", "--svg", str(svg_path))
        self.assertEqual(code, EXIT_OK)
        payload = json.loads(out)
        self.assertEqual(payload["count"], 1)
        self.assertEqual(len(payload["sizes"]), 1)
        self.assertTrue(svg_path.exists())

    def test_size_of_quadruple(self):
        """Test sizing an explicit quadruple."""
        params = [str(k * math.pi / 2) for k in range(4)]
        code, out = self._run("size", self.ellipse_path, "--json", "--params", *params)
        self.assertEqual(code, EXIT_OK)
        payload = json.loads(out)
        self.assertEqual(payload["target"], "identity")
        self.assertEqual(len(payload["squares"]), 1)

    def test_input_errors(self):
        """Test exit codes for bad input."""
        self.assertEqual(self._run("analyze", str(self.dir / "missing.json"))[0], EXIT_INPUT)
        self.assertEqual(self._run("verify", "no_such_check")[0], EXIT_INPUT)
        self.assertEqual(self._run("verify", "chord_bound")[0], EXIT_INPUT)
        self.assertEqual(self._run("verify", "all")[0], EXIT_INPUT)

        broken = self.dir / "broken.json"
        broken.write_text("{}")
        self.assertEqual(self._run("find-squares", str(broken))[0], EXIT_INPUT)

    def test_verify_exit_codes(self):
        """Test verdict and failure exit codes."""
        code, out = self._run("verify", "combined_bound", "--json")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["verdict"], "holds")

        self.assertEqual(self._run("verify", "always_violated")[0], EXIT_VIOLATED)
        self.assertEqual(self._run("verify", "always_unstable")[0], EXIT_NUMERICAL)

    def test_verify_with_curve(self):
        """Test a one-curve check with options."""
        code, out = self._run("verify", "chord_bound", self.ellipse_path, "--trials", "500", "--seed", "2", "--json")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["check_name"], "chord_bound")

    def test_verify_suite(self):
        """Test running a suite file."""
        suite = self.dir / "suite.yaml"
        suite.write_text(
            "name: small\n"
            "checks:\n"
            "  - check: combined_bound\n"
            "  - check: arcsin_envelope\n"
        )
        self.assertEqual(self._run("verify", "all", "--suite", str(suite))[0], EXIT_OK)

    def test_generate_and_render(self):
        """Test scenario generation followed by rendering."""
        out_dir = self.dir / "generated"
        code, out = self._run("generate", "--kind", "circle", "--name", "unit", "--out", str(out_dir), "--json")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["written"], [str(out_dir / "unit.json")])

        picture = self.dir / "picture.svg"
        code, _ = self._run("render", str(out_dir / "unit.json"), self.ellipse_path, "-o", str(picture), "--squares")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(_count(picture.read_text(), "curve-"), 2)

    def test_undecodable_curve(self):
        """Test a curve file that is not UTF-8 text."""
        binary = self.dir / "binary.json"
        binary.write_bytes(b"\xff\xfe\x00\x81 not text")
        code, _ = self._run("analyze", str(binary))
        self.assertEqual(code, EXIT_INPUT)

    def test_malformed_yaml(self):
        """Test suite, scenario and homotopy files that are not valid YAML."""
        broken = self.dir / "broken.yaml"
        broken.write_text("checks: [combined_bound\n")
        self.assertEqual(self._run("verify", "all", "--suite", str(broken))[0], EXIT_INPUT)
        self.assertEqual(self._run("generate", str(broken), "--out", str(self.dir))[0], EXIT_INPUT)
        self.assertEqual(self._run("census", str(broken), "--no-track")[0], EXIT_INPUT)

        undecodable = self.dir / "undecodable.yaml"
        undecodable.write_bytes(b"kind: \xff\xfe\n")
        self.assertEqual(self._run("generate", str(undecodable))[0], EXIT_INPUT)

        scalar = self.dir / "scalar.yaml"
        scalar.write_text("just a sentence\n")
        self.assertEqual(self._run("generate", str(scalar), "--out", str(self.dir))[0], EXIT_INPUT)

        code, _ = self._run("generate", "--kind", "ellipse", "--set", "a=[1", "--out", str(self.dir))
        self.assertEqual(code, EXIT_INPUT)

    def test_generate_invalid(self):
        """Test an invalid scenario override."""
        code, _ = self._run("generate", "--kind", "ellipse", "--set", "a=-1", "--out", str(self.dir))
        self.assertEqual(code, EXIT_INPUT)

    def test_track_and_census(self):
        """Test the homotopy commands on a constant family."""
        spec = self.dir / "homotopy.yaml"
        spec.write_text("start: ellipse.json\nend: ellipse.json\n")

        frames = self.dir / "frames"
        code, out = self._run("track", str(spec), "--json", "--svg-dir", str(frames))
        self.assertEqual(code, EXIT_OK)
        payload = json.loads(out)
        self.assertEqual(len(payload["traces"]), 1)
        self.assertTrue((frames / "trace00_0000.svg").exists())

        code, out = self._run("census", str(spec), "--times", "0,1", "--no-track", "--json")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual([row["count"] for row in json.loads(out)["rows"]], [1, 1])


if __name__ == '__main__':
    unittest.main()
