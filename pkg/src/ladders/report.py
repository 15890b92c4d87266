"""Machine-readable pass/fail records for algebraic identity checks."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import ConvergenceError

SCHEMA_VERSION = "1"
ARTIFACT_VERSION = "0.1.0"


@dataclass(frozen=True)
class Check:
    """One verified identity: a residual norm compared against a tolerance.

    A skipped check carries a reason instead of a residual (e.g. a dual-basis
    construction that is undefined for a degenerate spectrum).
    """

    name: str
    residual: float | None = None
    tolerance: float | None = None
    skipped: bool = False
    reason: str | None = None

    @property
    def passed(self) -> bool | None:
        if self.skipped:
            return None
        return self.residual <= self.tolerance

    def as_dict(self) -> dict:
        if self.skipped:
            return {"name": self.name, "skipped": True, "reason": self.reason}
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass
class VerificationReport:
    """Ordered collection of checks for one operator family."""

    family_descriptor: str
    checks: list[Check] = field(default_factory=list)
    matrices_dumped: list[str] = field(default_factory=list)
    seed: int | None = None

    def add(self, name: str, residual: float, tolerance: float) -> Check:
        residual = float(residual)
        if not math.isfinite(residual):
            raise ConvergenceError(
                f"check {name!r} produced a non-finite residual ({residual})"
            )
        check = Check(name=name, residual=residual, tolerance=float(tolerance))
        self.checks.append(check)
        return check

    def skip(self, name: str, reason: str) -> Check:
        check = Check(name=name, skipped=True, reason=reason)
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.skipped)

    def as_dict(self, timestamp: str | None = None) -> dict:
        if timestamp is None:
            timestamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        return {
            "schema_version": SCHEMA_VERSION,
            "artifact_version": ARTIFACT_VERSION,
            "family_descriptor": self.family_descriptor,
            "timestamp": timestamp,
            "seed": self.seed,
            "checks": [c.as_dict() for c in self.checks],
            "matrices_dumped": list(self.matrices_dumped),
        }

    def to_json(self, timestamp: str | None = None) -> str:
        return json.dumps(self.as_dict(timestamp), indent=2) + "\n"
