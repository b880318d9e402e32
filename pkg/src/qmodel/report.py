"""Verification results and their JSON / text serialization."""

from __future__ import annotations

import json
import math
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Optional, Union

EXACT_ZERO = "exact-zero"

Residual = Union[float, str]


@dataclass
class CheckReport:
    """Outcome of one identity check.

    ``residual`` is a float, or the string ``"exact-zero"`` for identities
    decided in the exact algebra.  An exact check that failed stores the
    number of surviving terms as a float so it can never compare as zero.
    """

    suite: str
    name: str
    anchor: str
    residual: Residual
    tol: float
    passed: bool
    params: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0
    expect_fail: bool = False

    @classmethod
    def numeric(cls, suite, name, anchor, residual, tol, params=None, expect_fail=False,
                wall_time=0.0, threshold=None) -> "CheckReport":
        """Numeric check.  With ``expect_fail`` the check passes when the
        residual lies above ``threshold`` (a negative control)."""
        residual = float(residual)
        if expect_fail:
            bound = tol if threshold is None else threshold
            ok = math.isfinite(residual) and residual > bound
        else:
            ok = math.isfinite(residual) and residual <= tol
        return cls(suite, name, anchor, residual, tol, bool(ok), dict(params or {}),
                   wall_time, expect_fail)

    @classmethod
    def exact(cls, suite, name, anchor, leftover_terms: int, params=None,
              expect_fail=False, wall_time=0.0) -> "CheckReport":
        zero = leftover_terms == 0
        residual: Residual = EXACT_ZERO if zero else float(leftover_terms)
        ok = (not zero) if expect_fail else zero
        return cls(suite, name, anchor, residual, 0.0, ok, dict(params or {}),
                   wall_time, expect_fail)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "residual": self.residual,
            "tol": self.tol,
            "pass": self.passed,
            "expect_fail": self.expect_fail,
            "params": self.params,
            "wall_time": self.wall_time,
            "suite": self.suite,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "CheckReport":
        return cls(d["suite"], d["name"], d["anchor"], d["residual"], d["tol"], d["pass"],
                   dict(d.get("params", {})), d.get("wall_time", 0.0), d.get("expect_fail", False))

    def line(self) -> str:
        res = self.residual if isinstance(self.residual, str) else f"{self.residual:.3e}"
        status = "PASS" if self.passed else "FAIL"
        tag = " (negative control)" if self.expect_fail else ""
        return f"{status} {self.suite}/{self.name}{tag}: residual={res} tol={self.tol:.1e}"


@contextmanager
def timed() -> Iterator[List[float]]:
    box = [0.0]
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = time.perf_counter() - t0


def all_pass(reports: Iterable[CheckReport]) -> bool:
    return all(r.passed for r in reports)


def emit_report(reports: List[CheckReport], fmt: str = "json", suite: Optional[str] = None,
                params: Optional[Dict[str, Any]] = None) -> str:
    """Serialize reports; order is preserved exactly as given."""
    if fmt == "text":
        lines = [r.line() for r in reports]
        lines.append(f"OVERALL {'PASS' if all_pass(reports) else 'FAIL'} ({len(reports)} checks)")
        return "\n".join(lines) + "\n"
    if fmt != "json":
        raise ValueError(f"unknown report format {fmt!r}")
    doc: Dict[str, Any] = {
        "suite": suite if suite is not None else _common_suite(reports),
        "params": dict(params or {}),
        "checks": [r.to_dict() for r in reports],
        "pass": all_pass(reports),
    }
    return json.dumps(doc, indent=2, sort_keys=False, default=_json_default)


def parse_report(text: str) -> List[CheckReport]:
    doc = json.loads(text)
    return [CheckReport.from_dict(c) for c in doc["checks"]]


def _common_suite(reports: List[CheckReport]):
    names = []
    for r in reports:
        if r.suite not in names:
            names.append(r.suite)
    if not names:
        return None
    return names[0] if len(names) == 1 else names


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "item"):
        return obj.item()
    return str(obj)
