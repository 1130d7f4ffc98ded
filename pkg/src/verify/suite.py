"""
Check Suite Module.

Named checks live in ``check_registry``; a suite file (YAML or JSON) lists
check invocations with their input curves and options. ``run_suite`` runs
them concurrently and returns the reports in declaration order.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union
import inspect
import logging

import pandas as pd
from pydantic import BaseModel, Field, model_validator
from pydantic import ValidationError as SchemaError

from cli_io.curve_io import read_curve
from cli_io.scenarios import ScenarioSpec, generate_curves
from curves.base import BaseCurve
from curves.fourier import FourierCurve
from curves.polyline import PolylineCurve
from size_metric.correspondence import ParamCorrespondence
from squares.finder import SquareSearchConfig
from utils.errors import NumericalError
from utils.helpers import load_yaml_config
from utils.registry import Registry
from utils.validators import ValidationError
from verify.checks import (
    check_arcsin_envelope,
    check_chord_bound,
    check_initial_size_bound,
    check_no_intermediate,
    combined_bound_check,
    small_square_sweep,
)
from verify.main_theorem import annulus_scenario, certify_main_theorem, peanut_demonstration
from verify.report import CheckReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RegisteredCheck:
    func: Callable[..., CheckReport]
    arity: int
    description: str


check_registry: Registry[RegisteredCheck] = Registry("Check")


def register_check(name: str, arity: int, description: str):
    """Register ``func(curves, config, **options)`` under ``name``."""
    def wrap(func):
        check_registry.register(name, RegisteredCheck(func, arity, description))
        return func
    return wrap


def run_check(
    name: str,
    curves: Sequence[BaseCurve] = (),
    config: Optional[SquareSearchConfig] = None,
    **options: Any,
) -> CheckReport:
    """
    Run a registered check.

    Raises:
        KeyError: If ``name`` is not registered
        ValidationError: If the number of input curves is wrong
    """
    check = check_registry.get(name)
    if len(curves) != check.arity:
        raise ValidationError(f"Check '{name}' takes {check.arity} curves, got {len(curves)}")
    try:
        inspect.signature(check.func).bind(list(curves), config, **options)
    except TypeError as e:
        raise ValidationError(f"Check '{name}': {e}")
    return check.func(list(curves), config, **options)


def _fourier(curve: BaseCurve, role: str) -> FourierCurve:
    if not isinstance(curve, FourierCurve):
        raise ValidationError(f"{role} must be a fourier curve")
    return curve


@register_check("initial_size_bound", 1, "Every square has identity size ≥ π/κ")
def _initial_size(curves, config):
    return check_initial_size_bound(curves[0], config)


@register_check("chord_bound", 1, "Arcs of length ℓ ≤ π/(4κ) have chord ≥ ℓ/√2")
def _chord(curves, config, trials: Optional[int] = None, seed: int = 0):
    return check_chord_bound(curves[0], trials, seed)


@register_check("no_intermediate", 2, "No square of α has size π/(4κ) w.r.t. the projection onto β")
def _no_intermediate(curves, config):
    alpha, beta = curves
    f = ParamCorrespondence.from_projection(alpha, _fourier(beta, "beta"), ref="beta", strict=False)
    return check_no_intermediate(alpha, beta, f, config)


@register_check("small_square_bound", 2, "Sizes w.r.t. the projection onto β stay below √2/(5κ) + √2ρ")
def _small_square(curves, config):
    alpha, beta = curves
    f = ParamCorrespondence.from_projection(alpha, _fourier(beta, "beta"), ref="beta", strict=False)
    return small_square_sweep(alpha, beta, f, config=config)


@register_check("main_theorem", 2, "A polygon close to a smooth Jordan curve has an inscribed square")
def _main_theorem(curves, config):
    gamma, beta = curves
    if not isinstance(beta, PolylineCurve):
        raise ValidationError("beta must be a polyline curve")
    return certify_main_theorem(_fourier(gamma, "gamma"), beta, config)


@register_check("annulus", 1, "A polygon in a thin annulus has an inscribed square")
def _annulus(curves, config, r: float = 1.0, R: float = 2.0, center: Sequence[float] = (0.0, 0.0)):
    if not isinstance(curves[0], PolylineCurve):
        raise ValidationError("The annulus check takes a polyline curve")
    return annulus_scenario(r, R, curves[0], center, config)


@register_check("peanut", 0, "A small square on the peanut still has large size")
def _peanut(curves, config, neck: float = 0.1):
    return peanut_demonstration(neck, config)


@register_check("arcsin_envelope", 0, "arcsin(x) ≤ πx/2 on [0, 1]")
def _arcsin(curves, config, samples: Optional[int] = None):
    return check_arcsin_envelope(samples)


@register_check("combined_bound", 0, "√2/(5κ) + 1/(100κ) < π/(4κ)")
def _combined(curves, config, kappa: float = 1.0):
    return combined_bound_check(kappa)


class CurveSource(BaseModel):
    """A suite input: a curve file or an inline scenario."""
    path: Optional[str] = None
    scenario: Optional[ScenarioSpec] = None

    @model_validator(mode="after")
    def _one_source(self) -> "CurveSource":
        if (self.path is None) == (self.scenario is None):
            raise ValueError("Give exactly one of path or scenario")
        return self

    def load(self, base_dir: Path) -> BaseCurve:
        if self.path is not None:
            return read_curve(base_dir / self.path, normalize=True)
        return generate_curves(self.scenario)[0][1]


class CheckEntry(BaseModel):
    check: str
    label: Optional[str] = None
    curves: List[CurveSource] = Field(default_factory=list)
    grid: Optional[int] = Field(default=None, ge=16)
    options: Dict[str, Any] = Field(default_factory=dict)


class SuiteFile(BaseModel):
    name: str = "suite"
    workers: int = Field(default=1, ge=1)
    checks: List[CheckEntry]


@dataclass
class SuiteResult:
    """Reports of a suite run, in declaration order."""

    name: str
    labels: List[str]
    reports: List[CheckReport]
    errors: List[str] = field(default_factory=list)

    @property
    def violated(self) -> bool:
        return any(report.violated for report in self.reports)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "label": self.labels,
            "check": [report.check_name for report in self.reports],
            "verdict": [report.verdict.value for report in self.reports],
            "margin": [report.margin for report in self.reports],
        })

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "violated": self.violated,
            "errors": self.errors,
            "reports": [dict(report.to_dict(), label=label) for label, report in zip(self.labels, self.reports)],
        }


def load_suite(source: Union[str, Path, Dict[str, Any], SuiteFile]) -> SuiteFile:
    if isinstance(source, SuiteFile):
        return source
    data = source if isinstance(source, dict) else load_yaml_config(source)
    try:
        return SuiteFile.model_validate(data)
    except SchemaError as e:
        raise ValidationError(f"Invalid suite: {e.errors()[0]['msg']} at {e.errors()[0]['loc']}")


def run_suite(
    source: Union[str, Path, Dict[str, Any], SuiteFile],
    workers: Optional[int] = None,
    base_dir: Optional[Path] = None,
) -> SuiteResult:
    """
    Run every check of a suite.

    Args:
        source: Suite file path, decoded suite object or SuiteFile
        workers: Thread count (default from the suite)
        base_dir: Directory that relative curve paths start from

    Returns:
        SuiteResult; checks that fail numerically are reported as
        inapplicable with the error in their notes
    """
    suite = load_suite(source)
    if base_dir is None:
        base_dir = Path(source).parent if isinstance(source, (str, Path)) else Path(".")
    workers = workers or suite.workers

    for entry in suite.checks:
        check_registry.get(entry.check)

    def run(entry: CheckEntry):
        label = entry.label or entry.check
        try:
            curves = [item.load(base_dir) for item in entry.curves]
            config = SquareSearchConfig.from_config(grid_n=entry.grid)
            return label, run_check(entry.check, curves, config, **entry.options), None
        except NumericalError as e:
            logger.error(f"Check '{label}' failed: {e}")
            report = CheckReport.inapplicable(entry.check, {}, f"Numerical failure: {e}")
            return label, report, f"{label}: {e}"

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(run, suite.checks))
    else:
        outcomes = [run(entry) for entry in suite.checks]

    result = SuiteResult(
        suite.name,
        [label for label, _, _ in outcomes],
        [report for _, report, _ in outcomes],
        [error for _, _, error in outcomes if error],
    )
    logger.info(
        f"Suite '{suite.name}': {len(result.reports)} checks, "
        f"{sum(report.violated for report in result.reports)} violated, {len(result.errors)} errors"
    )
    return result
