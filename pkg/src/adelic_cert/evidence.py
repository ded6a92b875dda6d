"""Verdicts and the evidence steps they carry."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Status(enum.Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Step:
    claim: str
    rule: str
    witness: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"claim": self.claim, "rule": self.rule, "witness": self.witness}


@dataclass(frozen=True)
class Verdict:
    status: Status
    steps: tuple[Step, ...] = ()
    reason: str | None = None

    @classmethod
    def certified(cls, *steps: Step) -> Verdict:
        return cls(Status.CERTIFIED, tuple(steps))

    @classmethod
    def refuted(cls, reason: str, *steps: Step) -> Verdict:
        return cls(Status.REFUTED, tuple(steps), reason)

    @classmethod
    def inconclusive(cls, reason: str, *steps: Step) -> Verdict:
        return cls(Status.INCONCLUSIVE, tuple(steps), reason)

    @property
    def ok(self) -> bool:
        return self.status is Status.CERTIFIED

    def step(self, rule: str) -> Step:
        for s in self.steps:
            if s.rule == rule:
                return s
        raise KeyError(rule)

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "reason": self.reason,
            "steps": [s.as_dict() for s in self.steps],
        }
