"""
squarepeg command line.

Subcommands:
    analyze       curvature, length and simplicity of a curve file
    find-squares  inscribed squares of a curve (optionally cross-checked by the oracle)
    size          sizes of inscribed squares, optionally w.r.t. a projection onto a target
    track         continuation of the t = 0 squares through a homotopy
    census        square counts, parities and events along a homotopy
    verify        one registered check, or ``verify all --suite FILE``
    generate      scenario curve files
    render        SVG of curves and their squares

Exit codes: 0 success, 1 violated check, 2 input or format error,
3 numerical failure.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence
import argparse
import inspect
import logging
import sys

import pandas as pd
import yaml
from pydantic import ValidationError as SchemaError

from config.config import LOGGING_CONFIG
from continuation.census import census
from continuation.tracker import track_square
from curves.analysis import analyze_curve, tube_radius
from curves.fourier import FourierCurve
from curves.geometry import is_simple
from cli_io.curve_io import load_homotopy, read_curve
from cli_io.scenarios import ScenarioSpec, generate
from cli_io.svg import write_frames, write_svg
from size_metric.correspondence import ParamCorrespondence
from size_metric.oriented_length import square_size, square_size_identity
from squares.candidate import SquareCandidate
from squares.finder import SquareSearchConfig, find_all_squares
from squares.oracle import brute_force_oracle, oracle_agreement
from utils.errors import NumericalError
from utils.helpers import load_yaml_config, safe_json_dumps
from utils.validators import ValidationError
from verify.suite import check_registry, run_check, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _search_config(args: argparse.Namespace) -> SquareSearchConfig:
    return SquareSearchConfig.from_config(grid_n=args.grid, tol=args.tol)


def _emit(args: argparse.Namespace, payload: Any, frame: Optional[pd.DataFrame] = None) -> None:
    if args.json:
        print(safe_json_dumps(payload))
    elif frame is not None:
        print(frame.to_string(index=False) if not frame.empty else "(none)")
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")


def _square_frame(squares: Sequence[SquareCandidate], sizes: Optional[Sequence[float]] = None) -> pd.DataFrame:
    frame = pd.DataFrame({
        "sidelength": [square.sidelength for square in squares],
        "residual": [square.residual_norm for square in squares],
        "params": [", ".join(f"{p:.6f}" for p in square.params) for square in squares],
    })
    if sizes is not None:
        frame.insert(1, "size", list(sizes))
    return frame


def _parse_times(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ValidationError(f"Times must be comma-separated numbers, got '{text}'")


def _parse_assignments(items: Optional[Sequence[str]]) -> Dict[str, Any]:
    """``key=value`` pairs with YAML-typed values."""
    parsed = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ValidationError(f"Expected key=value, got '{item}'")
        try:
            parsed[key.strip()] = yaml.safe_load(value)
        except yaml.YAMLError:
            raise ValidationError(f"Cannot parse the value in '{item}'")
    return parsed


def cmd_analyze(args: argparse.Namespace) -> int:
    curve = read_curve(args.curve, normalize=True)
    analysis = analyze_curve(curve)
    payload = {
        "kind": curve.kind,
        "jordan": curve.jordan,
        "simple": is_simple(curve),
        "regular": curve.is_regular(),
        **analysis.to_dict(),
    }
    if isinstance(curve, FourierCurve):
        payload["tube_radius"] = tube_radius(curve)
    _emit(args, payload)
    return EXIT_OK


def cmd_find_squares(args: argparse.Namespace) -> int:
    curve = read_curve(args.curve, normalize=True)
    squares = find_all_squares(curve, _search_config(args))
    sizes = [square_size_identity(curve, square) for square in squares]
    payload: Dict[str, Any] = {"count": len(squares), "squares": [square.to_dict() for square in squares], "sizes": sizes}

    if args.oracle:
        oracle = brute_force_oracle(curve, min(args.grid or 64, 64))
        payload["oracle_count"] = len(oracle)
        payload["oracle_agreement"] = oracle_agreement(squares, oracle)
        logger.info(f"Oracle found {len(oracle)} squares; agreement {payload['oracle_agreement']}")

    if args.svg:
        write_svg(args.svg, curve, squares, [f"{len(squares)} squares"], sizes)

    _emit(args, payload, _square_frame(squares, sizes))
    return EXIT_OK


def cmd_size(args: argparse.Namespace) -> int:
    curve = read_curve(args.curve, normalize=True)
    if args.params:
        squares = [SquareCandidate.from_params(curve, args.params)]
    else:
        squares = find_all_squares(curve, _search_config(args))

    if args.target:
        target = read_curve(args.target, normalize=True)
        corr = ParamCorrespondence.from_projection(curve, target, ref=str(args.target), strict=False)
        sizes = [square_size(square, target, corr) for square in squares]
        reference = {"target": str(args.target), "degree": corr.degree, "max_displacement": corr.max_displacement}
    else:
        sizes = [square_size_identity(curve, square) for square in squares]
        reference = {"target": "identity"}

    payload = {**reference, "squares": [dict(square.to_dict(), size=size) for square, size in zip(squares, sizes)]}
    _emit(args, payload, _square_frame(squares, sizes))
    return EXIT_OK


def cmd_track(args: argparse.Namespace) -> int:
    h = load_homotopy(args.spec, seed=args.seed)
    config = _search_config(args)
    start = find_all_squares(h.curve_at(0.0), config)
    traces = [track_square(h, square) for square in start]

    frame = pd.DataFrame({
        "start": [trace.start_event.value for trace in traces],
        "end": [trace.end_event.value for trace in traces],
        "t_end": [trace.final.t for trace in traces],
        "size_start": [trace.initial.size_wrt_p for trace in traces],
        "size_end": [trace.final.size_wrt_p for trace in traces],
        "samples": [len(trace.samples) for trace in traces],
    })
    payload: Dict[str, Any] = {"homotopy": h.to_dict(), "traces": [trace.to_dict() for trace in traces]}

    if args.svg_dir:
        for index, trace in enumerate(traces):
            write_frames(h, trace.samples, args.svg_dir, prefix=f"trace{index:02d}")

    if args.census:
        report = census(h, _parse_times(args.census), config)
        payload["census"] = report.to_dict()
        if not args.json:
            print(report.to_frame().to_string(index=False))

    _emit(args, payload, frame)
    return EXIT_OK


def cmd_census(args: argparse.Namespace) -> int:
    h = load_homotopy(args.spec, seed=args.seed)
    report = census(h, _parse_times(args.times), _search_config(args), track=not args.no_track)
    _emit(args, report.to_dict(), report.to_frame())
    if report.has_crossing or report.has_band_entry:
        logger.warning(
            f"{len(report.crossings)} crossings and {len(report.band_entries)} band entries "
            f"near the size threshold {report.threshold:.6g}"
        )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.check == "all":
        if not args.suite:
            raise ValidationError("verify all needs --suite FILE")
        result = run_suite(args.suite)
        _emit(args, result.to_dict(), result.to_frame())
        if result.violated:
            return EXIT_VIOLATED
        return EXIT_NUMERICAL if result.errors else EXIT_OK

    check = check_registry.get(args.check)
    options = _parse_assignments(args.option)
    for key in ("trials", "r", "R"):
        if getattr(args, key) is not None:
            options[key] = getattr(args, key)
    if args.seed is not None and "seed" in inspect.signature(check.func).parameters:
        options["seed"] = args.seed

    curves = [read_curve(path, normalize=True) for path in args.inputs]
    report = run_check(args.check, curves, _search_config(args), **options)
    frame = pd.DataFrame([{"check": report.check_name, "verdict": report.verdict.value, "margin": report.margin}])
    _emit(args, report.to_dict(), frame)
    if not args.json:
        for note in report.notes:
            print(f"note: {note}")
    return EXIT_VIOLATED if report.violated else EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    data = (load_yaml_config(args.spec) if args.spec else None) or {}
    entries = data.get("scenarios", [data]) if isinstance(data, dict) else data
    if not isinstance(entries, list) or not all(isinstance(entry, dict) for entry in entries):
        raise ValidationError("A scenario file holds a mapping, a list of mappings or a 'scenarios' list")

    overrides = _parse_assignments(args.set)
    for key in ("kind", "name"):
        if getattr(args, key) is not None:
            overrides[key] = getattr(args, key)
    if args.out is not None:
        overrides["output_dir"] = args.out
    if args.seed is not None:
        overrides["seed"] = args.seed

    written = []
    for entry in entries:
        try:
            spec = ScenarioSpec.model_validate({**entry, **overrides})
        except SchemaError as e:
            raise ValidationError(f"Invalid scenario: {e.errors()[0]['msg']} at {e.errors()[0]['loc']}")
        written.extend(str(path) for path in generate(spec))

    _emit(args, {"written": written}, pd.DataFrame({"written": written}))
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    curves = [read_curve(path, normalize=True) for path in args.curves]
    squares: List[SquareCandidate] = []
    if args.squares:
        config = _search_config(args)
        for curve in curves:
            squares.extend(find_all_squares(curve, config))
    annotations = [Path(path).stem for path in args.curves]
    path = write_svg(args.output, curves, squares, annotations)
    _emit(args, {"written": str(path), "squares": len(squares)})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="Residual tolerance of the square search")
    common.add_argument("--grid", type=int, default=None, help="Seed grid resolution")
    common.add_argument("--seed", type=int, default=None, help="Random seed")
    common.add_argument("--json", action="store_true", help="Print JSON instead of a table")
    common.add_argument("--verbose", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(prog="squarepeg", description="Inscribed squares of closed plane curves")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("analyze", parents=[common], help="Curve analysis")
    p.add_argument("curve")
    p.set_defaults(handler=cmd_analyze)

    p = commands.add_parser("find-squares", parents=[common], help="Find inscribed squares")
    p.add_argument("curve")
    p.add_argument("--svg", default=None, help="Also write an SVG of the curve and its squares")
    p.add_argument("--oracle", action="store_true", help="Cross-check with the brute-force oracle")
    p.set_defaults(handler=cmd_find_squares)

    p = commands.add_parser("size", parents=[common], help="Sizes of inscribed squares")
    p.add_argument("curve")
    p.add_argument("--target", default=None, help="Measure w.r.t. the projection onto this curve")
    p.add_argument("--params", type=float, nargs=4, default=None, help="Measure this quadruple instead of the found squares")
    p.set_defaults(handler=cmd_size)

    p = commands.add_parser("track", parents=[common], help="Track squares through a homotopy")
    p.add_argument("spec", help="Homotopy spec file")
    p.add_argument("--svg-dir", default=None, help="Write one SVG frame per continuation sample")
    p.add_argument("--census", default=None, help="Comma-separated census times")
    p.set_defaults(handler=cmd_track)

    p = commands.add_parser("census", parents=[common], help="Square census along a homotopy")
    p.add_argument("spec", help="Homotopy spec file")
    p.add_argument("--times", default="0,0.25,0.5,0.75,1", help="Comma-separated times including 0 and 1")
    p.add_argument("--no-track", action="store_true", help="Count squares without tracking them")
    p.set_defaults(handler=cmd_census)

    p = commands.add_parser("verify", parents=[common], help="Run a check or a suite")
    p.add_argument("check", help=f"Check name or 'all'; one of {check_registry.list_keys()}")
    p.add_argument("inputs", nargs="*", help="Curve files the check takes")
    p.add_argument("--suite", default=None, help="Suite file for 'verify all'")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--r", type=float, default=None, help="Annulus inner radius")
    p.add_argument("--R", type=float, default=None, help="Annulus outer radius")
    p.add_argument("--option", action="append", help="Extra check option key=value")
    p.set_defaults(handler=cmd_verify)

    p = commands.add_parser("generate", parents=[common], help="Generate scenario curve files")
    p.add_argument("spec", nargs="?", default=None, help="Scenario spec file")
    p.add_argument("--kind", default=None)
    p.add_argument("--name", default=None)
    p.add_argument("--set", action="append", help="Scenario field key=value")
    p.add_argument("--out", default=None, help="Output directory")
    p.set_defaults(handler=cmd_generate)

    p = commands.add_parser("render", parents=[common], help="Render curves to SVG")
    p.add_argument("curves", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--squares", action="store_true", help="Draw the inscribed squares")
    p.set_defaults(handler=cmd_render)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else LOGGING_CONFIG["level"],
        format=LOGGING_CONFIG["format"],
    )

    try:
        return args.handler(args)
    except KeyError as e:
        message = e.args[0] if e.args else str(e)
        logger.error(message)
        print(f"error: {message}", file=sys.stderr)
        return EXIT_INPUT
    except (ValidationError, OSError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
