"""Verification records shared by every identity check."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable

VERDICTS = ("pass", "fail", "inconclusive", "untestable")


class UntestableError(Exception):
    """Raised when a check cannot be carried out at the requested point.

    Typical causes: transformed parameters leave the unit disc, a pole ring
    sits on the integration contour, or a shifted series stops terminating.
    """


class PoleError(ValueError):
    """The argument is numerically on a pole lattice."""


@dataclass
class VerificationReport:
    id: str
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    verdict: str
    tolerance: float
    meta: dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def __str__(self) -> str:
        return f"{self.id}: {self.verdict} (rel={self.rel_residual:.3e}, tol={self.tolerance:.1e})"


def make_report(
    id: str,
    lhs,
    rhs,
    *,
    terms: Iterable[complex] | None = None,
    tol: float,
    meta: dict[str, Any] | None = None,
    verdict: str | None = None,
) -> VerificationReport:
    """Build a report; the relative residual is normalised by the largest term.

    ``terms`` lists the magnitudes the identity is built from (defaults to
    ``[lhs, rhs]``), so a cancelling sum never ends up in the denominator.
    """
    lhs, rhs = complex(lhs), complex(rhs)
    terms = [lhs, rhs] if terms is None else [complex(t) for t in terms]
    scale = max((abs(t) for t in terms), default=0.0)
    ab = abs(lhs - rhs)
    if scale > 0:
        rel = ab / scale
    else:
        rel = 0.0 if ab == 0 else math.inf
    if math.isnan(rel):
        rel = math.inf
    if verdict is None:
        verdict = "pass" if rel <= tol else "fail"
    return VerificationReport(id, lhs, rhs, float(ab), float(rel), verdict, float(tol), dict(meta or {}))


def untestable_report(id: str, reason: str, tol: float = 0.0, meta: dict | None = None) -> VerificationReport:
    m = dict(meta or {})
    m["reason"] = reason
    nan = complex(math.nan, math.nan)
    return VerificationReport(id, nan, nan, math.nan, math.nan, "untestable", tol, m)


def combine_reports(id: str, reports: list[VerificationReport], tol: float | None = None) -> VerificationReport:
    """Collapse several reports into the worst one (by relative residual)."""
    if not reports:
        raise ValueError("no reports to combine")
    worst = max(reports, key=lambda r: -1.0 if math.isnan(r.rel_residual) else r.rel_residual)
    tol = worst.tolerance if tol is None else tol
    verdicts = {r.verdict for r in reports}
    if "fail" in verdicts:
        verdict = "fail"
    elif verdicts == {"pass"}:
        verdict = "pass"
    elif "inconclusive" in verdicts:
        verdict = "inconclusive"
    else:
        verdict = "untestable" if "pass" not in verdicts else "pass"
    meta = {"instances": len(reports), "worst": worst.id}
    return VerificationReport(id, worst.lhs, worst.rhs, worst.abs_residual, worst.rel_residual, verdict, tol, meta)
