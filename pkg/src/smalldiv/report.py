"""Verification reports shared by the harnesses and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


def _jsonable(x):
    from fractions import Fraction

    from .exactnum import CyclotomicNumber

    if isinstance(x, bool) or x is None or isinstance(x, (int, float, str)):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, CyclotomicNumber):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return str(x)


@dataclass
class VerificationReport:
    name: str
    params: dict = field(default_factory=dict)
    status: str = PASS
    verified: Any = None  # (lo, hi) coefficient range
    residual: float | None = None
    witness: dict | None = None
    detail: str = ""

    @classmethod
    def passed(cls, name, params, verified=None, residual=None, detail=""):
        return cls(name, dict(params), PASS, verified, residual, None, detail)

    @classmethod
    def failed(cls, name, params, exponent=None, lhs=None, rhs=None, residual=None, detail=""):
        if exponent is None and residual is None:
            raise ValueError("a failure needs a witness")
        witness = {"exponent": exponent, "lhs": lhs, "rhs": rhs} if exponent is not None else None
        return cls(name, dict(params), FAIL, None, residual, witness, detail)

    @classmethod
    def skipped(cls, name, params, reason):
        return cls(name, dict(params), SKIPPED, detail=reason)

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": _jsonable(self.params),
            "status": self.status,
            "verified": _jsonable(self.verified),
            "residual": self.residual,
            "witness": _jsonable(self.witness),
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, d: dict) -> VerificationReport:
        v = d.get("verified")
        return cls(d["name"], d.get("params", {}), d["status"],
                   tuple(v) if isinstance(v, list) else v,
                   d.get("residual"), d.get("witness"), d.get("detail", ""))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        ps = " ".join(f"{k}={v}" for k, v in self.params.items())
        line = f"{self.status.upper():7s} {self.name} [{ps}]"
        if self.verified is not None:
            lo, hi = self.verified
            line += f" range {lo}..{hi}"
        if self.residual is not None:
            line += f" residual {self.residual:.3e}"
        if self.witness:
            w = self.witness
            line += f" first mismatch at {w['exponent']}: {w['lhs']} != {w['rhs']}"
        if self.detail:
            line += f" ({self.detail})"
        return line
