"""Run reports: per-instance records, named checks, and a dichotomy summary.

Structured reports are JSON.  Timings are carried along but excluded from
equality, so ``parse_json(emit_json(r)) == r`` holds for every report.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional


@dataclass
class Record:
    n: int
    q: int
    verdict: str  # "split" | "nonsplit" | "skipped" | "failure"
    source: str = "wreath"
    system_solvable: Optional[bool] = None
    section: Optional[list[list[int]]] = None
    certificate: Optional[list[int]] = None
    evidence_valid: Optional[bool] = None
    far_commutation_finding: Optional[str] = None
    oracle_lifts: Optional[bool] = None
    oracle_complement: Optional[bool] = None
    oracles_agree: Optional[bool] = None
    expected_split: Optional[bool] = None
    notes: list[str] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict, compare=False)

    @property
    def matches_theorem(self) -> Optional[bool]:
        if self.expected_split is None or self.verdict not in ("split", "nonsplit"):
            return None
        return (self.verdict == "split") == self.expected_split

    @property
    def failure(self) -> bool:
        if self.verdict == "failure":
            return True
        if self.evidence_valid is False or self.oracles_agree is False:
            return True
        return self.matches_theorem is False


@dataclass
class Check:
    name: str
    passed: bool
    n: Optional[int] = None
    q: Optional[int] = None
    detail: str = ""


@dataclass
class Report:
    command: str
    records: list[Record] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)

    @property
    def deviations(self) -> list[tuple[int, int]]:
        return [(r.n, r.q) for r in self.records if r.matches_theorem is False]

    @property
    def failures(self) -> int:
        return sum(r.failure for r in self.records) + sum(not c.passed for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def summary(self) -> dict:
        judged = [r for r in self.records if r.matches_theorem is not None]
        return {
            "instances": len(self.records),
            "checks": len(self.checks),
            "failures": self.failures,
            "dichotomy_checked": len(judged),
            "dichotomy_holds": not self.deviations,
            "deviations": [list(d) for d in self.deviations],
        }

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "records": [asdict(r) for r in self.records],
            "checks": [asdict(c) for c in self.checks],
            "summary": self.summary(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        return cls(
            command=data["command"],
            records=[Record(**r) for r in data.get("records", [])],
            checks=[Check(**c) for c in data.get("checks", [])],
        )


def emit_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def parse_json(text: str) -> Report:
    return Report.from_dict(json.loads(text))


def _flag(v: Optional[bool]) -> str:
    return "-" if v is None else ("yes" if v else "no")


def render_text(report: Report) -> str:
    out = []
    if report.records:
        header = f"{'n':>3} {'q':>4}  {'verdict':<9} {'system':<6} {'lifts':<5} {'compl':<5} {'theorem':<7} status"
        out.append(header)
        out.append("-" * len(header))
        for r in report.records:
            out.append(
                f"{r.n:>3} {r.q:>4}  {r.verdict:<9} {_flag(r.system_solvable):<6} "
                f"{_flag(r.oracle_lifts):<5} {_flag(r.oracle_complement):<5} "
                f"{_flag(r.matches_theorem):<7} {'FAIL' if r.failure else 'ok'}"
            )
            if r.far_commutation_finding:
                out.append(f"          finding: {r.far_commutation_finding}")
            for note in r.notes:
                out.append(f"          note: {note}")
        out.append("")
    if report.checks:
        for c in report.checks:
            where = "" if c.n is None else f" n={c.n} q={c.q}"
            line = f"[{'PASS' if c.passed else 'FAIL'}] {c.name}{where}"
            if c.detail and not c.passed:
                line += f": {c.detail}"
            out.append(line)
        out.append("")
    s = report.summary()
    if s["dichotomy_checked"]:
        verdict = "holds" if s["dichotomy_holds"] else "FAILS at " + ", ".join(
            f"(n={n}, q={q})" for n, q in s["deviations"]
        )
        out.append(f"dichotomy 'splits iff 4 does not divide q': {verdict} on {s['dichotomy_checked']} instances")
    out.append(f"failures: {s['failures']}")
    return "\n".join(out) + "\n"
