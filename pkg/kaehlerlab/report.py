"""Check results and run reports, with a schema-stable JSON form.

JSON schema of a run report::

    {
      "version": str, "timestamp": str,
      "config": {...},                       # echo of the run configuration
      "records": [                           # sorted by (check, point_index)
        {"check": str, "point_index": int, "point": [float],
         "inputs_digest": str, "values": {str: any},
         "residual": float|null, "margin": float|null, "tolerance": float|null,
         "passed": bool, "error": {"type": str, "message": str, ...}|null,
         "notes": [str]}
      ],
      "summary": {"total": int, "passed": int, "failed": int,
                  "worst": {check: {"residual": float|null, "margin": float|null,
                                    "failed": int}}}
    }
"""

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional

import numpy as np


class ResultKind(str, Enum):
    RESIDUAL = "residual"
    MARGIN = "margin"
    MEASUREMENT = "measurement"


@dataclass
class CheckResult:
    label: str
    value: float
    kind: ResultKind = ResultKind.RESIDUAL
    tolerance: Optional[float] = None

    @property
    def passed(self) -> bool:
        if self.kind is ResultKind.MEASUREMENT:
            return True
        return self.excess <= 0.0

    @property
    def excess(self) -> float:
        """How far past its tolerance a graded result lies (non-positive when passing)."""
        if math.isnan(self.value):
            return math.inf
        bound = self.tolerance or 0.0
        if self.kind is ResultKind.MARGIN:
            return -bound - self.value
        return self.value - bound


@dataclass
class CheckReport:
    """Named check with its per-label results, free-form values and notes."""

    name: str
    results: List[CheckResult] = field(default_factory=list)
    values: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def add(
        self,
        label: str,
        value: float,
        kind: ResultKind = ResultKind.RESIDUAL,
        tolerance: Optional[float] = None,
    ) -> CheckResult:
        result = CheckResult(label, float(value), ResultKind(kind), tolerance)
        self.results.append(result)
        return result

    def add_margin(self, label: str, value: float, tolerance: Optional[float] = None) -> CheckResult:
        return self.add(label, value, ResultKind.MARGIN, tolerance)

    def measure(self, label: str, value: Any) -> None:
        self.values[label] = value

    def note(self, message: str) -> None:
        if message not in self.notes:
            self.notes.append(message)

    def __getitem__(self, label: str) -> CheckResult:
        for result in self.results:
            if result.label == label:
                return result
        raise KeyError(label)

    def __contains__(self, label: str) -> bool:
        return any(result.label == label for result in self.results)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def residual(self) -> Optional[float]:
        values = [r.value for r in self.results if r.kind is ResultKind.RESIDUAL]
        return max(values) if values else None

    @property
    def margin(self) -> Optional[float]:
        values = [r.value for r in self.results if r.kind is ResultKind.MARGIN]
        return min(values) if values else None

    @property
    def decisive(self) -> Optional[CheckResult]:
        graded = [r for r in self.results if r.kind is not ResultKind.MEASUREMENT]
        return max(graded, key=lambda r: r.excess) if graded else None


def plain(value: Any) -> Any:
    """Convert numpy scalars/arrays and enums into JSON-friendly Python values."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def inputs_digest(*parts: Any) -> str:
    payload = json.dumps(plain(list(parts)), sort_keys=True, default=str)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass
class RunRecord:
    check: str
    point_index: int
    point: List[float]
    inputs_digest: str
    values: Dict[str, Any] = field(default_factory=dict)
    residual: Optional[float] = None
    margin: Optional[float] = None
    tolerance: Optional[float] = None
    passed: bool = False
    error: Optional[Dict[str, Any]] = None
    notes: List[str] = field(default_factory=list)

    @classmethod
    def from_check(cls, report: CheckReport, point_index: int, point: Iterable[float], digest: str) -> "RunRecord":
        values: Dict[str, Any] = {r.label: r.value for r in report.results}
        values.update(report.values)
        decisive = report.decisive
        return cls(
            check=report.name,
            point_index=point_index,
            point=[float(v) for v in point],
            inputs_digest=digest,
            values=plain(values),
            residual=report.residual,
            margin=report.margin,
            tolerance=decisive.tolerance if decisive else None,
            passed=report.passed,
            notes=list(report.notes),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "point_index": self.point_index,
            "point": list(self.point),
            "inputs_digest": self.inputs_digest,
            "values": plain(self.values),
            "residual": self.residual,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "error": self.error,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunRecord":
        return cls(
            check=data["check"],
            point_index=int(data["point_index"]),
            point=[float(v) for v in data.get("point", [])],
            inputs_digest=data.get("inputs_digest", ""),
            values=dict(data.get("values", {})),
            residual=data.get("residual"),
            margin=data.get("margin"),
            tolerance=data.get("tolerance"),
            passed=bool(data.get("passed", False)),
            error=data.get("error"),
            notes=list(data.get("notes", [])),
        )


@dataclass
class RunReport:
    config: Dict[str, Any] = field(default_factory=dict)
    records: List[RunRecord] = field(default_factory=list)
    timestamp: str = ""
    version: str = ""

    def sort(self) -> None:
        self.records.sort(key=lambda r: (r.check, r.point_index))

    @property
    def summary(self) -> Dict[str, Any]:
        worst: Dict[str, Dict[str, Any]] = {}
        for record in self.records:
            entry = worst.setdefault(record.check, {"residual": None, "margin": None, "failed": 0})
            if record.residual is not None and (entry["residual"] is None or record.residual > entry["residual"]):
                entry["residual"] = record.residual
            if record.margin is not None and (entry["margin"] is None or record.margin < entry["margin"]):
                entry["margin"] = record.margin
            if not record.passed:
                entry["failed"] += 1
        passed = sum(1 for r in self.records if r.passed)
        return {
            "total": len(self.records),
            "passed": passed,
            "failed": len(self.records) - passed,
            "worst": {name: worst[name] for name in sorted(worst)},
        }

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def to_dict(self, include_timestamp: bool = True) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "version": self.version,
            "config": plain(self.config),
            "records": [r.to_dict() for r in self.records],
            "summary": self.summary,
        }
        if include_timestamp:
            data["timestamp"] = self.timestamp
        return data

    def to_json(self, include_timestamp: bool = True) -> str:
        return json.dumps(self.to_dict(include_timestamp), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunReport":
        return cls(
            config=dict(data.get("config", {})),
            records=[RunRecord.from_dict(r) for r in data.get("records", [])],
            timestamp=data.get("timestamp", ""),
            version=data.get("version", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))
