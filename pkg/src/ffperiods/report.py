"""Verification reports: one row per checked identity instance."""

from __future__ import annotations

import csv
import io
import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from fractions import Fraction


def fmt(x) -> str:
    """Stable text form for exact values (Fraction, Cyc, int, bool, tuples)."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (tuple, list)):
        return "(" + ", ".join(fmt(v) for v in x) + ")"
    return str(x)


@dataclass
class Row:
    suite: str
    anchor: str
    params: str
    lhs: str
    rhs: str
    passed: bool
    micros: int = 0
    exploratory: bool = False


@dataclass
class VerificationReport:
    descriptor: dict
    rows: list[Row] = field(default_factory=list)

    def add(self, suite: str, anchor: str, params, lhs, rhs, passed=None, micros: int = 0,
            exploratory: bool = False) -> bool:
        if passed is None:
            passed = lhs == rhs
        self.rows.append(Row(suite, anchor, fmt(params) if not isinstance(params, str) else params,
                             fmt(lhs), fmt(rhs), bool(passed), int(micros), exploratory))
        return bool(passed)

    @contextmanager
    def timed(self, suite: str, anchor: str, params):
        """Collect (lhs, rhs[, passed]) through the yielded dict and time the block."""
        slot: dict = {}
        t0 = time.perf_counter()
        yield slot
        micros = int((time.perf_counter() - t0) * 1e6)
        self.add(suite, anchor, params, slot.get("lhs"), slot.get("rhs"), slot.get("passed"),
                 micros, slot.get("exploratory", False))

    def extend(self, other: "VerificationReport") -> None:
        self.rows.extend(other.rows)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows if not r.exploratory)

    @property
    def failures(self) -> list[Row]:
        return [r for r in self.rows if not r.passed and not r.exploratory]

    def counts(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for r in self.rows:
            c = out.setdefault(r.suite, {"pass": 0, "fail": 0})
            c["pass" if r.passed else "fail"] += 1
        return out

    def to_csv(self, timings: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ["suite", "anchor", "params", "lhs", "rhs", "pass", "micros"]
        w.writerow(cols)
        for r in self.rows:
            w.writerow([r.suite, r.anchor + (" [exploratory]" if r.exploratory else ""),
                        r.params, r.lhs, r.rhs, "pass" if r.passed else "FAIL",
                        r.micros if timings else 0])
        return buf.getvalue()

    def summary(self, config: dict | None = None) -> dict:
        return {"context": self.descriptor, "passed": self.passed, "counts": self.counts(),
                "failures": [asdict(r) for r in self.failures], "config": config or {}}

    def to_json(self, config: dict | None = None) -> str:
        return json.dumps(self.summary(config), indent=2, sort_keys=True)
