"""Machine-readable check verdicts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
PRECONDITION_FAILED = "precondition-failed"
STATUSES = (PASS, FAIL, INCONCLUSIVE, PRECONDITION_FAILED)


@dataclass(frozen=True)
class CheckReport:
    check: str
    status: str
    witness: Any = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        out = {"check": self.check, "status": self.status, "witness": _jsonable(self.witness)}
        if self.details:
            out["details"] = _jsonable(self.details)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def combine(check: str, parts: list[CheckReport], details: dict | None = None) -> CheckReport:
    """Fold sub-reports: any fail wins, then precondition, then inconclusive."""
    for status in (FAIL, PRECONDITION_FAILED, INCONCLUSIVE):
        bad = [p for p in parts if p.status == status]
        if bad:
            return CheckReport(check, status, {"first": bad[0].to_dict()}, details or {})
    return CheckReport(check, PASS, None, details or {})


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return repr(x)
