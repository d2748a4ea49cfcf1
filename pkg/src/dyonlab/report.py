"""Run reports (deterministic JSON) and CSV array output."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np


@dataclass
class ResultEntry:
    """One numeric result with the tolerance it is held to and where the reference comes from."""
    name: str
    value: Any
    tolerance: Optional[float] = None
    provenance: str = "analytic"  # "analytic" or "oracle"
    expected: Any = None
    passed: Optional[bool] = None

    def as_dict(self) -> dict:
        out = {"name": self.name, "value": self.value, "tolerance": self.tolerance,
               "provenance": self.provenance}
        if self.expected is not None:
            out["expected"] = self.expected
        if self.passed is not None:
            out["passed"] = self.passed
        return out


@dataclass
class RunReport:
    command: str
    version: str
    seed: int
    inputs: dict
    results: list[ResultEntry] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    wall_time: Optional[float] = None

    def add(self, name: str, value, tolerance=None, provenance="analytic", expected=None,
            error: Optional[float] = None) -> ResultEntry:
        """Record a result; when ``error`` and ``tolerance`` are both given it becomes a check."""
        passed = None if error is None or tolerance is None else bool(error <= tolerance)
        entry = ResultEntry(name, value, tolerance, provenance, expected, passed)
        self.results.append(entry)
        return entry

    @property
    def passed(self) -> bool:
        return all(r.passed is not False for r in self.results)

    @property
    def failures(self) -> list[str]:
        return [r.name for r in self.results if r.passed is False]

    def as_dict(self) -> dict:
        out = {"command": self.command, "version": self.version, "seed": self.seed,
               "inputs": self.inputs, "results": [r.as_dict() for r in self.results],
               "passed": self.passed}
        if self.data:
            out["data"] = self.data
        if self.wall_time is not None:
            out["wall_time"] = self.wall_time
        return out


def _plain(obj):
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def _dump(obj, indent: int, level: int) -> str:
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_dump(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_dump(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _dump(v, indent, level + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON with sorted keys and every float written with 17 significant digits."""
    return _dump(_plain(obj), 2, 0) + "\n"


def emit_report(report: RunReport, path: Optional[str | Path]) -> str:
    text = dumps(report.as_dict())
    if path is not None:
        Path(path).write_text(text)
    return text


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """CSV whose first line names the columns; floats use 17 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format(v, ".17g") if isinstance(v, (float, np.floating)) else v for v in row])
