"""Named checks, their expected outcomes, and the reports they produce."""

from __future__ import annotations

import fnmatch
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Union

from .engine.prove import INCONCLUSIVE, PROVED, Verdict

__all__ = [
    "PROVED",
    "INCONCLUSIVE",
    "PASS",
    "FAIL",
    "EVIDENCE",
    "NO_EVIDENCE",
    "OUT_OF_RANGE",
    "Check",
    "CheckResult",
    "VerificationReport",
    "run_checks",
    "select",
]

PASS = "PASS"
FAIL = "FAIL"
EVIDENCE = "EVIDENCE"
NO_EVIDENCE = "NO-EVIDENCE"
OUT_OF_RANGE = "OUT-OF-RANGE"

# what a check body may return
Outcome = Union[Verdict, bool, "CheckResult"]


@dataclass
class CheckResult:
    id: str
    status: str
    expected: str
    verdict: Optional[Verdict] = None
    detail: str = ""
    millis: float = 0.0
    data: Dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == self.expected

    @property
    def display_status(self) -> str:
        if self.ok and self.status == INCONCLUSIVE:
            return "INCONCLUSIVE-EXPECTED"
        return self.status

    @property
    def witness_kind(self) -> str:
        if self.verdict is not None:
            return self.verdict.witness_kind
        return "exact" if self.status in (PASS, FAIL) else "none"

    @property
    def witness_bytes(self) -> int:
        return self.verdict.witness_bytes if self.verdict is not None else 0

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "status": self.status,
            "expected": self.expected,
            "witness_kind": self.witness_kind,
            "witness_bytes": self.witness_bytes,
            "millis": round(self.millis, 3),
        }
        if self.verdict is not None and self.verdict.degree is not None:
            out["degree"] = self.verdict.degree
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Check:
    """A catalog entry: stable id, the outcome the mathematics predicts, and a body."""

    id: str
    expected: str
    body: Callable[[], Outcome]

    def run(self) -> CheckResult:
        start = time.perf_counter()
        out = self.body()
        millis = (time.perf_counter() - start) * 1000.0
        if isinstance(out, CheckResult):
            out.id, out.expected = self.id, self.expected
            out.millis = millis
            return out
        if isinstance(out, Verdict):
            detail = ""
            if out.status != PROVED and out.remainder is not None:
                detail = f"normal form has {len(out.remainder)} terms"
            return CheckResult(self.id, out.status, self.expected, out, detail, millis)
        return CheckResult(self.id, PASS if out else FAIL, self.expected, None, "", millis)


def select(checks: Iterable[Check], pattern: Optional[str]) -> List[Check]:
    if not pattern:
        return list(checks)
    pats = [p.strip() for p in pattern.split(",") if p.strip()]
    return [c for c in checks if any(fnmatch.fnmatchcase(c.id, p) for p in pats)]


def run_checks(checks: Iterable[Check], pattern: Optional[str] = None) -> "VerificationReport":
    return VerificationReport([c.run() for c in select(checks, pattern)])


@dataclass
class VerificationReport:
    results: List[CheckResult] = field(default_factory=list)

    def __iter__(self):
        return iter(self.results)

    def __len__(self):
        return len(self.results)

    def __getitem__(self, check_id: str) -> CheckResult:
        for r in self.results:
            if r.id == check_id:
                return r
        raise KeyError(check_id)

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.results.extend(other.results)
        return self

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.ok]

    def proved(self) -> List[CheckResult]:
        return [r for r in self.results if r.status == PROVED]
