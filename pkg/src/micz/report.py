"""Verification reports shared by the identity suites."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """One identity family.

    For an ordinary check ``residual`` is the worst (largest) residual and
    the check passes when it is at most ``tol``.  For a negative control
    ``residual`` is the smallest residual seen and the check passes when it
    is at least ``tol``, i.e. the identity was violated every time.
    """

    name: str
    residual: float
    samples: int
    tol: float
    negative: bool = False

    @property
    def passed(self) -> bool:
        if self.negative:
            return self.residual >= self.tol
        return self.residual <= self.tol

    def to_dict(self) -> dict:
        return {
            "identity": self.name,
            "residual": float(self.residual),
            "samples": int(self.samples),
            "tolerance": float(self.tol),
            "negative_control": bool(self.negative),
            "pass": bool(self.passed),
        }


@dataclass
class VerificationReport:
    suite: str
    k: int
    samples: int
    tol: float
    checks: list[CheckResult] = field(default_factory=list)
    mu: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks if not c.negative), default=0.0)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "k": self.k,
            "mu": self.mu,
            "samples": self.samples,
            "tol": self.tol,
            "max_residual": float(self.max_residual),
            "pass": bool(self.passed),
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self, **kw) -> str:
        kw.setdefault("indent", 2)
        return json.dumps(self.to_dict(), **kw)

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            op = ">=" if c.negative else "<="
            flag = "PASS" if c.passed else "FAIL"
            lines.append(f"[{flag}] {self.suite}/{c.name}: {c.residual:.3e} {op} {c.tol:.1e} (n={c.samples})")
        return lines


def merge_reports(suite: str, reports: list[VerificationReport], mu: float | None = None) -> VerificationReport:
    """Combine per-point reports: worst residual per check name, summed counts."""
    if not reports:
        raise ValueError("nothing to merge")
    merged: dict[str, CheckResult] = {}
    for rep in reports:
        for c in rep.checks:
            prev = merged.get(c.name)
            if prev is None:
                merged[c.name] = CheckResult(c.name, c.residual, c.samples, c.tol, c.negative)
                continue
            worst = min(prev.residual, c.residual) if c.negative else max(prev.residual, c.residual)
            merged[c.name] = CheckResult(c.name, worst, prev.samples + c.samples, c.tol, c.negative)
    first = reports[0]
    return VerificationReport(suite, first.k, len(reports), first.tol, list(merged.values()), mu=mu)
