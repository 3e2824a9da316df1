"""Shared result record for all verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    passed: bool
    samples: int = 0
    details: dict = field(default_factory=dict)
    witness: object = None

    @property
    def status(self):
        return "pass" if self.passed else "fail"

    def to_json(self):
        out = {"name": self.name, "status": self.status, "samples": self.samples,
               "details": self.details}
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def __bool__(self):
        return self.passed
