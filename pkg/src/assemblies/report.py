"""Check reports and three-valued ("trool") helpers.

A trool is ``True``, ``False`` or ``None`` (unknown).  Every bounded search
in the package answers with one of these, and reports aggregate them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

SCHEMA = 1

PASS = "pass"
FAIL = "fail"
UNKNOWN = "unknown"


def trool_all(values: Iterable[Optional[bool]]) -> Optional[bool]:
    """Kleene conjunction: False wins over unknown."""
    result: Optional[bool] = True
    for v in values:
        if v is False:
            return False
        if v is None:
            result = None
    return result


def trool_any(values: Iterable[Optional[bool]]) -> Optional[bool]:
    """Kleene disjunction: True wins over unknown."""
    result: Optional[bool] = False
    for v in values:
        if v is True:
            return True
        if v is None:
            result = None
    return result


def status_of(value: Optional[bool]) -> str:
    return {True: PASS, False: FAIL, None: UNKNOWN}[value]


@dataclass
class Check:
    name: str
    status: str
    detail: Any = None

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    title: str
    params: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def add(self, name: str, value, detail: Any = None) -> Check:
        status = value if isinstance(value, str) else status_of(value)
        check = Check(name, status, detail)
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.detail))

    @property
    def status(self) -> str:
        statuses = {c.status for c in self.checks}
        if FAIL in statuses:
            return FAIL
        if UNKNOWN in statuses:
            return UNKNOWN
        return PASS

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def failing(self) -> list:
        return [c for c in self.checks if c.status != PASS]

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "title": self.title,
            "params": self.params,
            "status": self.status,
            "checks": [c.to_json() for c in self.checks],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def summary(self) -> str:
        lines = [f"{self.title}: {self.status}"]
        for c in self.checks:
            lines.append(f"  [{c.status}] {c.name}")
        return "\n".join(lines)
