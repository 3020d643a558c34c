"""Dataset documents: model, events, topology radius, named relations and reports.

The document is UTF-8 JSON with sorted keys::

    {
      "format": "kcausal-dataset",
      "version": "1",
      "model": {"kind": ..., "region": [[t0, t1], [x0, x1]], ...},
      "scheme": {"type": "grid" | "random" | "explicit", ...},
      "events": [[t, x], ...],
      "radius": float | null,
      "relations": {"I": {"n": n, "bits": "<base64>"}, "K": ...},
      "meta": {...},
      "reports": [{...}, ...]
    }

A relation is stored row-major, each row packed into ceil(n/8) bytes with
bit ``j % 8`` of byte ``j // 8`` set iff ``(i, j)`` is in the relation
(least-significant bit first), then base64-encoded.
"""
from __future__ import annotations

import base64
import json
from dataclasses import dataclass, field

import numpy as np

from . import causal
from . import relation as rel
from .errors import MalformedSpec
from .spacetimes import EventSet, make_model
from .topology import build_topology

FORMAT = "kcausal-dataset"
VERSION = "1"


def encode_relation(R) -> dict:
    R = rel.as_rel(R)
    packed = np.packbits(R, axis=1, bitorder="little")
    return {"n": int(R.shape[0]), "bits": base64.b64encode(packed.tobytes()).decode("ascii")}


def decode_relation(d) -> np.ndarray:
    n = int(d["n"])
    width = (n + 7) // 8
    raw = np.frombuffer(base64.b64decode(d["bits"], validate=True), dtype=np.uint8)
    if raw.size != n * width:
        raise MalformedSpec(f"relation payload has {raw.size} bytes, expected {n * width}")
    if n == 0:
        return np.zeros((0, 0), dtype=bool)
    return np.unpackbits(raw.reshape(n, width), axis=1, count=n, bitorder="little").astype(bool)


@dataclass
class Dataset:
    model: dict
    events: np.ndarray
    scheme: dict = field(default_factory=dict)
    radius: float | None = None
    relations: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)

    @classmethod
    def from_event_set(cls, es: EventSet):
        return cls(es.model.to_spec(), np.array(es.events, dtype=float), dict(es.scheme))

    @property
    def n(self):
        return len(self.events)

    def event_set(self) -> EventSet:
        return EventSet(np.array(self.events, dtype=float), make_model(self.model), dict(self.scheme))

    def structure(self) -> causal.CausalStructure:
        """Rebuild the causal structure from stored relations (no recomputation of K)."""
        missing = [k for k in ("I", "K") if k not in self.relations]
        if missing or self.radius is None:
            raise MalformedSpec(f"dataset lacks {missing or ['radius']}; run 'relations' first")
        es = self.event_set()
        T = build_topology(es, self.radius)
        return causal.CausalStructure(es, T, self.relations["I"], self.relations["K"],
                                      int(self.meta.get("iterations", 0)))

    def to_dict(self):
        return {
            "format": FORMAT,
            "version": VERSION,
            "model": self.model,
            "scheme": self.scheme,
            "events": [[float(v) for v in row] for row in np.asarray(self.events, dtype=float)],
            "radius": self.radius,
            "relations": {k: encode_relation(v) for k, v in sorted(self.relations.items())},
            "meta": self.meta,
            "reports": self.reports,
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("format") != FORMAT:
            raise MalformedSpec("not a kcausal dataset document")
        if d.get("version") != VERSION:
            raise MalformedSpec(f"unsupported dataset version {d.get('version')!r}")
        events = np.array(d["events"], dtype=float).reshape(-1, 2)
        rels = {k: decode_relation(v) for k, v in d.get("relations", {}).items()}
        for k, R in rels.items():
            if R.shape[0] != len(events):
                raise MalformedSpec(f"relation {k} has size {R.shape[0]}, dataset has {len(events)} events")
        return cls(d["model"], events, d.get("scheme", {}), d.get("radius"), rels,
                   d.get("meta", {}), d.get("reports", []))

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return dumps(self) == dumps(other)


def dumps(ds: Dataset) -> str:
    return json.dumps(ds.to_dict(), sort_keys=True, indent=1) + "\n"


def loads(text) -> Dataset:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedSpec(f"dataset is not valid JSON: {exc}") from None
    return Dataset.from_dict(d)


def save(ds: Dataset, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(ds))


def load(path) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def to_dot(R, name="R", labels=None) -> str:
    """DOT digraph with nodes in index order and edges in row-major order."""
    R = rel.as_rel(R)
    n = R.shape[0]
    lines = [f'digraph "{name}" {{']
    for i in range(n):
        label = f' [label="{labels[i]}"]' if labels is not None else ""
        lines.append(f"  n{i}{label};")
    for i, j in np.argwhere(R):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hasse(order) -> np.ndarray:
    """Covering pairs of a (reflexive or strict) partial order."""
    return rel.transitive_reduction(rel.strict_part(order))
