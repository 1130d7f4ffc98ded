"""
Check reports.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional
import math

from config.config import VERIFY_CONFIG


class Verdict(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    INAPPLICABLE = "inapplicable"


def _plain(value: Any) -> Any:
    return value.to_dict() if hasattr(value, "to_dict") else value


@dataclass
class CheckReport:
    """
    Outcome of one quantitative check.

    Attributes:
        check_name: Registered name of the check
        hypothesis_values: Named scalars used by the checked statement
        verdict: holds / violated / inapplicable
        margin: Bound minus measured value (positive means the bound holds)
        witnesses: Offending or certifying objects
        diagnostics: Additional measured quantities
        notes: Free-text remarks
        tolerance: Slack used to turn the margin into a verdict
    """

    check_name: str
    hypothesis_values: Dict[str, float]
    verdict: Verdict
    margin: float
    witnesses: List[Any] = field(default_factory=list)
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    tolerance: float = VERIFY_CONFIG["tolerance"]

    @classmethod
    def from_margin(
        cls,
        check_name: str,
        hypothesis_values: Dict[str, float],
        margin: float,
        tolerance: Optional[float] = None,
        witnesses: Optional[List[Any]] = None,
        diagnostics: Optional[Dict[str, Any]] = None,
        notes: Optional[List[str]] = None,
    ) -> "CheckReport":
        """Report whose verdict is holds exactly when margin ≥ −tolerance."""
        tolerance = VERIFY_CONFIG["tolerance"] if tolerance is None else tolerance
        verdict = Verdict.HOLDS if margin >= -tolerance else Verdict.VIOLATED
        return cls(
            check_name,
            hypothesis_values,
            verdict,
            float(margin),
            witnesses or [],
            diagnostics or {},
            notes or [],
            tolerance,
        )

    @classmethod
    def inapplicable(
        cls,
        check_name: str,
        hypothesis_values: Dict[str, float],
        reason: str,
        diagnostics: Optional[Dict[str, Any]] = None,
    ) -> "CheckReport":
        return cls(check_name, hypothesis_values, Verdict.INAPPLICABLE, math.nan, [], diagnostics or {}, [reason])

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def violated(self) -> bool:
        return self.verdict is Verdict.VIOLATED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check_name": self.check_name,
            "verdict": self.verdict.value,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "hypothesis_values": self.hypothesis_values,
            "witnesses": [_plain(witness) for witness in self.witnesses],
            "diagnostics": self.diagnostics,
            "notes": self.notes,
        }
