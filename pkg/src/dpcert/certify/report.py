"""Verdict values shared by all engines."""

from __future__ import annotations

from dataclasses import dataclass, field

CERTIFIED = "CERTIFIED"
FAILS = "FAILS"
NOT_ESTABLISHED = "NOT-ESTABLISHED"
UNDECIDED = "UNDECIDED"
HOLDS = "HOLDS"
SUCCESS = "SUCCESS"


@dataclass
class Verdict:
    status: str
    reason: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"status": self.status, "reason": self.reason}
        if self.details:
            out["details"] = self.details
        return out

    def __str__(self):
        return f"{self.status}: {self.reason}" if self.reason else self.status
