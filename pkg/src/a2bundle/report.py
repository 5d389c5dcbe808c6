"""Structured verification results.

Every machine check in this package produces a :class:`CheckResult`: a check
id, the printable inputs, a pass/fail status, named residuals (quantities
that must vanish or hold, printed exactly), and optional witness data (the
constructed objects that make the statement true).  A
:class:`VerificationReport` bundles results for the CLI, which can render
them as text or JSON.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dfield

SCHEMA_VERSION = "1"


@dataclass
class CheckResult:
    check_id: str
    inputs: dict
    status: str = "pass"  # "pass" | "fail" | "error"
    residuals: dict = dfield(default_factory=dict)
    witness: dict = dfield(default_factory=dict)
    millis: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "inputs": self.inputs,
            "status": self.status,
            "residuals": self.residuals,
            "witness": self.witness,
            "millis": self.millis,
        }


class CheckBuilder:
    """Accumulates expectations for one check and stamps the wall time.

    ``expect_zero`` records a polynomial (or other printable) that must be
    zero; ``expect`` records a named boolean condition.  Failures flip the
    status and keep the offending value in ``residuals`` so reports show the
    exact discrepancy.
    """

    def __init__(self, check_id: str, **inputs):
        self.check_id = check_id
        self.inputs = {k: str(v) for k, v in inputs.items()}
        self.residuals = {}
        self.witness_data = {}
        self.failed = False
        self._t0 = time.perf_counter()

    def expect_zero(self, name: str, value) -> bool:
        ok = not value
        self.residuals[name] = "0" if ok else str(value)
        if not ok:
            self.failed = True
        return ok

    def expect(self, name: str, cond: bool, detail: str = "") -> bool:
        if cond:
            self.residuals[name] = "ok"
        else:
            self.residuals[name] = detail or "failed"
            self.failed = True
        return cond

    def witness(self, **kv) -> None:
        for k, v in kv.items():
            self.witness_data[k] = v if isinstance(v, (int, str)) else str(v)

    def done(self) -> CheckResult:
        return CheckResult(
            check_id=self.check_id,
            inputs=self.inputs,
            status="fail" if self.failed else "pass",
            residuals=self.residuals,
            witness=self.witness_data,
            millis=int((time.perf_counter() - self._t0) * 1000),
        )


@dataclass
class VerificationReport:
    field: str
    checks: list
    version: str = SCHEMA_VERSION

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> str:
        return json.dumps(
            {
                "version": self.version,
                "field": self.field,
                "checks": [c.as_dict() for c in self.checks],
            },
            indent=2,
        )

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            tag = {"pass": "pass", "fail": "FAIL", "error": "ERROR"}[c.status]
            inputs = " ".join(f"{k}={v}" for k, v in c.inputs.items())
            lines.append(f"[{tag}] {c.check_id}  {inputs}  ({c.millis} ms)")
            if c.status != "pass":
                for name, val in c.residuals.items():
                    if val not in ("0", "ok"):
                        lines.append(f"    {name}: {val}")
        status = "all checks passed" if self.ok else "SOME CHECKS FAILED"
        lines.append(f"{len(self.checks)} check(s): {status}")
        return "\n".join(lines)
