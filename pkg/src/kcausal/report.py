from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

import numpy as np


def _plain(value):
    """Convert numpy scalars/arrays and tuples into JSON-friendly values."""
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value


@dataclass
class CheckReport:
    """Verdict of a property check.

    ``witness`` is the first counterexample found (lexicographically smallest
    where the check defines an order), ``params`` records every knob that
    influenced the verdict. Wall-clock time lives only in ``timing`` so that
    everything else is reproducible byte for byte.
    """

    name: str
    holds: bool
    witness: Any = None
    params: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    def to_dict(self, with_timing=True):
        d = {
            "name": self.name,
            "holds": bool(self.holds),
            "witness": _plain(self.witness),
            "params": _plain(self.params),
            "notes": list(self.notes),
            "details": _plain(self.details),
        }
        if with_timing:
            d["timing"] = _plain(self.timing)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            name=d["name"],
            holds=d["holds"],
            witness=d.get("witness"),
            params=d.get("params", {}),
            notes=d.get("notes", []),
            details=d.get("details", {}),
            timing=d.get("timing", {}),
        )

    def __str__(self):
        verdict = "PASS" if self.holds else "FAIL"
        s = f"[{verdict}] {self.name}"
        if not self.holds and self.witness is not None:
            s += f" witness={_plain(self.witness)}"
        return s


@contextmanager
def timed(report_timing: dict, key="seconds"):
    start = time.perf_counter()
    try:
        yield
    finally:
        report_timing[key] = time.perf_counter() - start
