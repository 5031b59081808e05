"""Uniform outcome record for every inequality/identity verification."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class CheckReport:
    """One verified inequality or identity: lhs <= rhs up to tolerance.

    Invariant: passed <=> margin >= -tolerance, margin = rhs - lhs.
    Verdict-style checks (membership yes/no) are encoded with the
    convention lhs = 0.5, rhs in {0, 1}, tolerance 0.25, so the same
    invariant carries them.
    """
    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    tolerance: float
    note: str = ""


def make_report(name, lhs, rhs, tolerance, note="") -> CheckReport:
    lhs, rhs = float(lhs), float(rhs)
    margin = rhs - lhs
    return CheckReport(name=name, lhs=lhs, rhs=rhs, margin=margin,
                       passed=bool(margin >= -tolerance), tolerance=float(tolerance),
                       note=note)


def verdict_report(name, ok, note="") -> CheckReport:
    return make_report(name, 0.5, 1.0 if ok else 0.0, 0.25, note=note)


def combine_reports(name, reports, note="") -> CheckReport:
    """Collapse sub-checks into one report carrying the worst margin."""
    if not reports:
        return verdict_report(name, True, note="vacuous: no sub-checks")
    worst = min(reports, key=lambda r: r.margin + r.tolerance)
    merged_note = note or worst.note
    rep = make_report(name, worst.lhs, worst.rhs, worst.tolerance, note=merged_note)
    if any(not r.passed for r in reports) and rep.passed:
        # a sub-check with its own tighter tolerance failed; keep that verdict
        rep = CheckReport(name=name, lhs=worst.lhs, rhs=worst.rhs, margin=worst.margin,
                          passed=False, tolerance=worst.tolerance, note=merged_note)
    return rep


def to_json_line(r: CheckReport) -> str:
    d = asdict(r)
    d["pass"] = d.pop("passed")
    return json.dumps(d, sort_keys=True)


def from_json_line(line: str) -> CheckReport:
    d = json.loads(line)
    d["passed"] = d.pop("pass")
    return CheckReport(**d)


def csv_row(r: CheckReport) -> str:
    return f"{r.name},{r.lhs!r},{r.rhs!r},{r.margin!r},{int(r.passed)}"


CSV_HEADER = "name,lhs,rhs,margin,pass"
