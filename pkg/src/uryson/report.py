"""Check records and reports with deterministic serialization."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .lattice import EcSeq, OrderProjection, PartitionOfUnity, Vec
from .rational import fmt_q


def encode(value: Any) -> Any:
    """JSON-ready form of lattice values; every rational becomes ``p/q``."""
    if isinstance(value, Fraction):
        return fmt_q(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Vec):
        return [fmt_q(c) for c in value.coords]
    if isinstance(value, EcSeq):
        return {"prefix": [fmt_q(c) for c in value.prefix], "tail": fmt_q(value.tail)}
    if isinstance(value, OrderProjection):
        return sorted(value.mask)
    if isinstance(value, PartitionOfUnity):
        return [sorted(b.mask) for b in value.blocks]
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    return repr(value)


def digest(value: Any) -> str:
    blob = json.dumps(encode(value), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


@dataclass
class Record:
    check: str
    anchor: str
    status: str
    inputs: str = ""
    expected: Any = None
    actual: Any = None
    witness: Any = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @classmethod
    def compare(cls, check, anchor, actual, expected, inputs=None, witness=None) -> "Record":
        ok = actual == expected
        return cls(
            check, anchor, "pass" if ok else "fail", digest(inputs),
            encode(expected), encode(actual), None if ok else encode(witness),
        )

    @classmethod
    def holds(cls, check, anchor, ok: bool, inputs=None, witness=None,
              expected=None, actual=None) -> "Record":
        return cls(
            check, anchor, "pass" if ok else "fail", digest(inputs),
            encode(expected), encode(actual), None if ok else encode(witness),
        )

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "anchor": self.anchor,
            "status": self.status,
            "inputs": self.inputs,
            "expected": self.expected,
            "actual": self.actual,
            "witness": self.witness,
        }


@dataclass
class Report:
    records: list = field(default_factory=list)
    seed: Optional[int] = None

    def add(self, record: Record) -> Record:
        self.records.append(record)
        return record

    def extend(self, other: "Report") -> "Report":
        self.records.extend(other.records)
        return self

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list:
        return [r for r in self.records if not r.passed]

    def summary(self) -> dict:
        fails = len(self.failures())
        return {
            "summary": True,
            "seed": self.seed,
            "total": len(self.records),
            "passed": len(self.records) - fails,
            "failed": fails,
        }

    def to_machine(self) -> str:
        lines = [json.dumps(r.to_dict(), sort_keys=True, separators=(",", ":")) for r in self.records]
        lines.append(json.dumps(self.summary(), sort_keys=True, separators=(",", ":")))
        return "\n".join(lines) + "\n"

    def to_table(self, failures_only: bool = False) -> str:
        rows = [r for r in self.records if not failures_only or not r.passed]
        width = max([len(r.check) for r in rows] + [5])
        out = [f"{'check'.ljust(width)}  status  anchor"]
        for r in rows:
            out.append(f"{r.check.ljust(width)}  {r.status.ljust(6)}  {r.anchor}")
            if not r.passed:
                out.append(f"{''.ljust(width)}  witness: {json.dumps(r.witness, sort_keys=True)}")
        s = self.summary()
        seed = "" if self.seed is None else f" (seed {self.seed})"
        out.append(f"{s['passed']}/{s['total']} passed, {s['failed']} failed{seed}")
        return "\n".join(out) + "\n"

    @classmethod
    def from_machine(cls, text: str) -> "Report":
        report = cls()
        for line in text.splitlines():
            if not line.strip():
                continue
            obj = json.loads(line)
            if obj.get("summary"):
                report.seed = obj.get("seed")
                continue
            report.add(Record(**obj))
        return report
