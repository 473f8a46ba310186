"""Verification reports shared by the library checks and the CLI."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

from . import __version__

STATUSES = ("pass", "fail", "skipped")


@dataclass
class Check:
    name: str
    status: str
    witness: str = ""


@dataclass
class VerificationReport:
    suite: str
    params: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    elapsed_ms: float = 0.0
    engine_version: str = __version__

    def __post_init__(self):
        self._start = time.perf_counter()

    def add(self, name: str, ok: bool, witness: str = "") -> bool:
        status = "pass" if ok else "fail"
        if not ok and not witness:
            witness = "mismatch"
        self.checks.append(Check(name, status, witness))
        return ok

    def skip(self, name: str, reason: str):
        self.checks.append(Check(name, "skipped", reason))

    def extend(self, other: "VerificationReport", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witness))

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if c.status == "fail"]

    def finish(self) -> "VerificationReport":
        self.elapsed_ms = round((time.perf_counter() - self._start) * 1000, 3)
        return self

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "checks": [asdict(c) for c in self.checks],
            "elapsed_ms": self.elapsed_ms,
            "engine_version": self.engine_version,
            "status": "pass" if self.passed else "fail",
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=str)

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        rep = cls(data["suite"], dict(data.get("params", {})))
        for c in data.get("checks", []):
            if c["status"] not in STATUSES:
                raise ValueError(f"bad status {c['status']!r}")
            rep.checks.append(Check(c["name"], c["status"], c.get("witness", "")))
        rep.elapsed_ms = data.get("elapsed_ms", 0.0)
        rep.engine_version = data.get("engine_version", __version__)
        return rep

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        lines = [f"{self.suite}: {'PASS' if self.passed else 'FAIL'} ({len(self.checks)} checks, {self.elapsed_ms:.0f} ms)"]
        for c in self.checks:
            if c.status != "pass":
                lines.append(f"  {c.status.upper()} {c.name}: {c.witness}")
        return "\n".join(lines)
