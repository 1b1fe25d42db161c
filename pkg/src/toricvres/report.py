"""Check records, pipeline errors and the machine-readable verification report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

SCHEMA = 1


class PreconditionError(ValueError):
    """Input violates a pipeline hypothesis."""


class NotSaturatedError(PreconditionError):
    def __init__(self, msg: str, saturation=None):
        super().__init__(msg)
        self.saturation = saturation


class IrrelevantIdealError(PreconditionError):
    pass


class CertificateError(RuntimeError):
    """A certified identity or bound failed; carries the failing check."""

    def __init__(self, msg: str, check=None):
        super().__init__(msg)
        self.check = check


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: Any = None

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": self.witness}


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)
    sections: dict = field(default_factory=dict)
    # wall-clock seconds per stage; kept out of the JSON so reports are reproducible
    timings: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, witness=None) -> CheckResult:
        c = CheckResult(name, bool(passed), witness)
        self.checks.append(c)
        return c

    def extend(self, prefix: str, checks) -> None:
        for c in checks:
            self.checks.append(CheckResult(f"{prefix}.{c.name}", c.passed, c.witness))

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "ok": self.ok,
            "checks": [c.as_dict() for c in self.checks],
            **self.sections,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)
