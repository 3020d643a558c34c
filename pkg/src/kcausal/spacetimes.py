"""Analytic 1+1 dimensional spacetime models and event samplers.

Coordinates are chart pairs ``(t, x)`` with light speed 1. Every model has a
rectangular chart region ``[t_min, t_max] x [x_min, x_max]``; the cylinder
identifies ``t`` modulo ``period`` (and ignores ``t_max``).

Chronology on the punctured plane is the flat one: a timelike curve can always
dodge isolated points. Causality loses the null pairs whose null segment runs
through a removed point. K+ on the punctured plane is the full closed cone.

For a removed spacelike segment ``sigma`` on the line ``L`` the diamond test
works in null coordinates ``u = t + x``, ``v = t - x``: the open (closed)
diamond between ``p`` and ``q`` is a box in ``(u, v)`` and meets ``L`` in a
parameter interval; when ``p`` and ``q`` sit on opposite sides of ``L`` they
are related iff that interval is not swallowed by ``sigma``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EventOutsideRegion,
    MalformedSpec,
    RegionTooSmall,
    SeedRequired,
    UnsupportedOracle,
)

MINKOWSKI = "minkowski_1p1"
MINUS_POINTS = "minkowski_minus_points"
MINUS_SEGMENT = "minkowski_minus_segment"
CYLINDER = "timelike_cylinder"
KINDS = (MINKOWSKI, MINUS_POINTS, MINUS_SEGMENT, CYLINDER)

ALIASES = {
    "minkowski": MINKOWSKI,
    "minus-point": MINUS_POINTS,
    "minus-points": MINUS_POINTS,
    "minus-segment": MINUS_SEGMENT,
    "cylinder": CYLINDER,
}

DEFAULT_REGION = ((0.0, 2.0), (-1.0, 1.0))
RNG_ALGORITHM = "numpy.random.Generator(PCG64)"
# absolute tolerance on light-cone comparisons, relative to the region size
CONE_RTOL = 1e-9


@dataclass(frozen=True)
class SpacetimeModel:
    kind: str
    region: tuple = DEFAULT_REGION
    removed: tuple = ()
    segment: tuple | None = None
    period: float | None = None

    @property
    def oracles(self):
        if self.kind == MINUS_SEGMENT:
            return frozenset({"I", "J"})
        return frozenset({"I", "J", "K"})

    @property
    def tol(self):
        (t0, t1), (x0, x1) = self.region
        return CONE_RTOL * max(t1 - t0, x1 - x0, self.period or 0.0, 1.0)

    @property
    def globally_hyperbolic(self):
        return self.kind == MINKOWSKI

    def to_spec(self):
        spec = {"kind": self.kind, "region": [list(self.region[0]), list(self.region[1])]}
        if self.removed:
            spec["removed"] = [list(p) for p in self.removed]
        if self.segment is not None:
            spec["segment"] = [list(p) for p in self.segment]
        if self.period is not None:
            spec["period"] = self.period
        return spec

    # geometry ---------------------------------------------------------

    def contains(self, pts):
        pts = np.atleast_2d(pts)
        (t0, t1), (x0, x1) = self.region
        tol = self.tol
        ok = (pts[:, 1] >= x0 - tol) & (pts[:, 1] <= x1 + tol)
        if self.kind == CYLINDER:
            return ok & (pts[:, 0] >= t0 - tol) & (pts[:, 0] < t0 + self.period - tol)
        return ok & (pts[:, 0] >= t0 - tol) & (pts[:, 0] <= t1 + tol)

    def removed_distance(self, pts):
        """Chart distance from each point to the removed set (inf if nothing removed)."""
        pts = np.atleast_2d(pts)
        d = np.full(len(pts), np.inf)
        for P in self.removed:
            d = np.minimum(d, np.linalg.norm(pts - np.asarray(P), axis=1))
        if self.segment is not None:
            a, b = (np.asarray(s, dtype=float) for s in self.segment)
            ab = b - a
            lam = np.clip(((pts - a) @ ab) / (ab @ ab), 0.0, 1.0)
            d = np.minimum(d, np.linalg.norm(pts - (a + lam[:, None] * ab), axis=1))
        return d

    def on_removed(self, pts):
        return self.removed_distance(pts) <= self.tol

    def boundary_distance(self, pts):
        """Chart distance to the region edge (x edges only on the cylinder) or removed set."""
        pts = np.atleast_2d(pts)
        (t0, t1), (x0, x1) = self.region
        d = np.minimum(pts[:, 1] - x0, x1 - pts[:, 1])
        if self.kind != CYLINDER:
            d = np.minimum(d, np.minimum(pts[:, 0] - t0, t1 - pts[:, 0]))
        return np.minimum(d, self.removed_distance(pts))

    def distance_matrix(self, pts):
        pts = np.atleast_2d(pts)
        dt = np.abs(pts[:, None, 0] - pts[None, :, 0])
        if self.kind == CYLINDER:
            dt = np.minimum(dt, self.period - dt)
        dx = pts[:, None, 1] - pts[None, :, 1]
        return np.hypot(dt, dx)

    # causal relations -------------------------------------------------

    def relation_matrix(self, kind, pts):
        """Vectorised oracle: ``M[i, j]`` iff ``(pts[i], pts[j])`` is in the relation ``kind``."""
        if kind not in ("I", "J", "K"):
            raise UnsupportedOracle(f"unknown oracle kind {kind!r}")
        if kind not in self.oracles:
            raise UnsupportedOracle(f"{self.kind} has no closed-form {kind} oracle")
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        n = len(pts)
        tol = self.tol
        same = np.eye(n, dtype=bool) | (self.distance_matrix(pts) <= tol)
        if self.kind == CYLINDER:
            # a future-directed timelike curve may wind around t as often as it likes
            return ~same if kind == "I" else np.ones((n, n), dtype=bool)
        dt = pts[None, :, 0] - pts[:, None, 0]
        dx = np.abs(pts[None, :, 1] - pts[:, None, 1])
        slack = dt - dx
        if kind == "I":
            M = slack > tol
        else:
            M = (slack >= -tol) | same
        if self.kind == MINUS_POINTS and kind == "J":
            M &= ~self._null_blocked(pts, slack, same)
        if self.kind == MINUS_SEGMENT:
            M &= ~self._segment_blocked(pts) | same
        if kind == "I":
            M &= ~same
        return M

    def _null_blocked(self, pts, slack, same):
        tol = self.tol
        null = (np.abs(slack) <= tol) & ~same
        blocked = np.zeros_like(null)
        if not null.any():
            return blocked
        d = pts[None, :, :] - pts[:, None, :]
        dd = np.einsum("ijk,ijk->ij", d, d)
        for P in self.removed:
            w = np.asarray(P, dtype=float)[None, :] - pts
            cross = d[:, :, 0] * w[:, None, 1] - d[:, :, 1] * w[:, None, 0]
            dot = d[:, :, 0] * w[:, None, 0] + d[:, :, 1] * w[:, None, 1]
            on = (np.abs(cross) <= tol * np.sqrt(np.maximum(dd, tol))) & (dot > 0) & (dot < dd)
            blocked |= null & on
        return blocked

    def _segment_blocked(self, pts):
        a, b = (np.asarray(s, dtype=float) for s in self.segment)
        d = b - a
        du, dv = d[0] + d[1], d[0] - d[1]
        u = pts[:, 0] + pts[:, 1]
        v = pts[:, 0] - pts[:, 1]
        ua, va = a[0] + a[1], a[0] - a[1]
        # parameter of L where u (resp. v) equals a given value
        lu = (u - ua) / du
        lv = (v - va) / dv
        lu_p, lu_q = lu[:, None], lu[None, :]
        lv_p, lv_q = lv[:, None], lv[None, :]
        lo = np.maximum(np.minimum(lu_p, lu_q), np.minimum(lv_p, lv_q))
        hi = np.minimum(np.maximum(lu_p, lu_q), np.maximum(lv_p, lv_q))
        side = d[0] * (pts[:, 1] - a[1]) - d[1] * (pts[:, 0] - a[0])
        tol = self.tol
        opposite = (side[:, None] * side[None, :]) < -tol * tol
        return opposite & (lo >= -tol) & (hi <= 1 + tol)


def parse_model_spec(text):
    """Parse the compact ``kind[:key=value,...]`` model syntax.

    Keys: ``t=a/b`` and ``x=a/b`` for the region, ``period=T``, ``p=t/x``
    (repeatable) for removed points, ``a=t/x`` and ``b=t/x`` for the segment
    endpoints. ``text`` may also be a JSON object.
    """
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedSpec(f"bad JSON model spec: {exc}") from None
    kind, _, rest = text.partition(":")
    spec = {"kind": kind.strip()}
    region = [list(DEFAULT_REGION[0]), list(DEFAULT_REGION[1])]
    seg = {}
    try:
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, _, val = item.partition("=")
            key = key.strip()
            if key in ("t", "x"):
                lo, hi = (float(v) for v in val.split("/"))
                region[0 if key == "t" else 1] = [lo, hi]
            elif key == "period":
                spec["period"] = float(val)
            elif key == "p":
                spec.setdefault("removed", []).append([float(v) for v in val.split("/")])
            elif key in ("a", "b"):
                seg[key] = [float(v) for v in val.split("/")]
            else:
                raise MalformedSpec(f"unknown model key {key!r}")
    except ValueError as exc:
        if isinstance(exc, MalformedSpec):
            raise
        raise MalformedSpec(f"cannot parse model spec {text!r}: {exc}") from None
    spec["region"] = region
    if seg:
        if set(seg) != {"a", "b"}:
            raise MalformedSpec("segment needs both a= and b=")
        spec["segment"] = [seg["a"], seg["b"]]
    return spec


def _pair(v, what):
    try:
        a, b = (float(x) for x in v)
    except (TypeError, ValueError):
        raise MalformedSpec(f"{what} must be a pair of numbers, got {v!r}") from None
    return (a, b)


def make_model(spec) -> SpacetimeModel:
    """Validate a model description (dict, compact string or JSON string)."""
    if isinstance(spec, SpacetimeModel):
        return spec
    if isinstance(spec, str):
        spec = parse_model_spec(spec)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise MalformedSpec("model spec needs a 'kind'")
    kind = ALIASES.get(spec["kind"], spec["kind"])
    if kind not in KINDS:
        raise MalformedSpec(f"unknown model kind {spec['kind']!r}")
    unknown = set(spec) - {"kind", "region", "removed", "segment", "period"}
    if unknown:
        raise MalformedSpec(f"unknown model fields {sorted(unknown)}")
    rt, rx = spec.get("region", DEFAULT_REGION)
    region = (_pair(rt, "t range"), _pair(rx, "x range"))
    if not (region[0][0] < region[0][1] and region[1][0] < region[1][1]):
        raise MalformedSpec(f"degenerate region {region}")
    removed = tuple(_pair(p, "removed point") for p in spec.get("removed", ()))
    segment = spec.get("segment")
    period = spec.get("period")

    if kind == MINUS_POINTS and not removed:
        raise MalformedSpec("minus-points model needs at least one removed point")
    if kind != MINUS_POINTS and removed:
        raise MalformedSpec(f"{kind} takes no removed points")
    if kind == MINUS_SEGMENT:
        if segment is None:
            raise MalformedSpec("minus-segment model needs a segment")
        segment = (_pair(segment[0], "segment end"), _pair(segment[1], "segment end"))
        dt = segment[1][0] - segment[0][0]
        dx = segment[1][1] - segment[0][1]
        if not abs(dx) > abs(dt):
            raise MalformedSpec("removed segment must be spacelike")
    elif segment is not None:
        raise MalformedSpec(f"{kind} takes no segment")
    if kind == CYLINDER:
        if period is None or not float(period) > 0:
            raise MalformedSpec("cylinder needs a positive period")
        period = float(period)
        region = ((region[0][0], region[0][0] + period), region[1])
    elif period is not None:
        raise MalformedSpec(f"{kind} takes no period")

    model = SpacetimeModel(kind, region, removed, segment, period)
    inside = np.array([p for p in removed] + (list(segment) if segment else []), dtype=float)
    if len(inside) and not model.contains(inside).all():
        raise MalformedSpec("removed set must lie inside the region")
    return model


@dataclass(frozen=True, eq=False)
class EventSet:
    events: np.ndarray
    model: SpacetimeModel
    scheme: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.events)

    def distance_matrix(self):
        return self.model.distance_matrix(self.events)

    def margin_mask(self, margin):
        """Events at chart distance >= margin from the region edge and the removed set."""
        return self.model.boundary_distance(self.events) >= margin - self.model.tol

    def relation(self, kind):
        return self.model.relation_matrix(kind, self.events)

    def slack(self):
        """Chart slack t_q - t_p - |x_q - x_p| for every ordered pair."""
        e = self.events
        return (e[None, :, 0] - e[:, None, 0]) - np.abs(e[None, :, 1] - e[:, None, 1])


def _grid_axis(lo, hi, m, periodic, anchor=None):
    if m < 1:
        raise RegionTooSmall("grid counts must be >= 1")
    if periodic:
        h = (hi - lo) / m
        return lo + h * np.arange(m), h
    if m == 1:
        return np.array([(lo + hi) / 2.0]), hi - lo
    h = (hi - lo) / (m - 1)
    nodes = lo + h * np.arange(m)
    if anchor is not None:
        # slide the lattice so the anchor sits half-way between two nodes
        frac = ((anchor - lo) / h) % 1.0
        nodes = nodes + (frac - 0.5) * h
    return nodes, h


def sample_grid(model, m_t, m_x, jitter=0.0, seed=None) -> EventSet:
    """Rectangular lattice, t-major order.

    With removed points the lattice is slid so the first removed point sits at
    a cell centre, i.e. mid-way between two diagonal (null-related) neighbours.
    Nodes that fall outside the region or on the removed set are skipped and
    recorded.
    """
    model = make_model(model)
    (t0, t1), (x0, x1) = model.region
    anchor = model.removed[0] if model.removed else (None, None)
    ts, ht = _grid_axis(t0, t1, m_t, model.kind == CYLINDER, anchor[0])
    xs, hx = _grid_axis(x0, x1, m_x, False, anchor[1])
    pts = np.array([(t, x) for t in ts for x in xs], dtype=float)
    if jitter:
        if seed is None:
            raise SeedRequired("jitter needs an explicit seed")
        if not jitter < 0.5 * min(ht, hx):
            raise ValueError("jitter must be below half the grid spacing")
        rng = np.random.default_rng(seed)
        pts = pts + rng.uniform(-jitter, jitter, size=pts.shape)
    keep = model.contains(pts) & ~model.on_removed(pts)
    skipped = [int(i) for i in np.flatnonzero(~keep)]
    pts = pts[keep]
    if len(pts) == 0:
        raise RegionTooSmall("no grid node survives")
    scheme = {"type": "grid", "m_t": int(m_t), "m_x": int(m_x), "jitter": float(jitter),
              "seed": seed, "skipped": skipped, "spacing": [float(ht), float(hx)]}
    if jitter:
        scheme["rng"] = RNG_ALGORITHM
    return EventSet(pts, model, scheme)


def sample_random(model, n, seed) -> EventSet:
    """``n`` independent uniform points in the region (fixed-count stand-in for sprinkling)."""
    model = make_model(model)
    if seed is None:
        raise SeedRequired("random sampling needs an explicit seed")
    if n < 1:
        raise RegionTooSmall("n must be >= 1")
    rng = np.random.default_rng(seed)
    (t0, t1), (x0, x1) = model.region
    lo, hi = np.array([t0, x0]), np.array([t1, x1])
    pts = np.empty((n, 2))
    resampled = 0
    for i in range(n):
        for _attempt in range(100):
            p = rng.uniform(lo, hi)
            if not model.on_removed(p)[0]:
                break
            resampled += 1
        else:
            raise RegionTooSmall("could not place a point off the removed set in 100 attempts")
        pts[i] = p
    scheme = {"type": "random", "n": int(n), "seed": int(seed), "rng": RNG_ALGORITHM,
              "resampled": resampled}
    return EventSet(pts, model, scheme)


def sample(model, scheme) -> EventSet:
    """Dispatch on ``scheme['type']`` (``'grid'`` or ``'random'``)."""
    scheme = dict(scheme)
    kind = scheme.pop("type", None)
    if kind == "grid":
        return sample_grid(model, scheme["m_t"], scheme["m_x"], scheme.get("jitter", 0.0), scheme.get("seed"))
    if kind == "random":
        if scheme.get("seed") is None:
            raise SeedRequired("random sampling needs an explicit seed")
        return sample_random(model, scheme["n"], scheme["seed"])
    raise MalformedSpec(f"unknown sampling scheme {kind!r}")


def event_set(model, events, scheme=None) -> EventSet:
    """Wrap explicit coordinates, checking they lie in the region and off the removed set."""
    model = make_model(model)
    pts = np.atleast_2d(np.asarray(events, dtype=float))
    bad = np.flatnonzero(~model.contains(pts) | model.on_removed(pts))
    if bad.size:
        raise EventOutsideRegion(f"event {bad[0]} at {pts[bad[0]].tolist()} is outside the model",
                                 witness=int(bad[0]))
    return EventSet(pts, model, dict(scheme or {"type": "explicit"}))


def oracle(model, kind, p, q) -> bool:
    """Closed-form membership of the pair ``(p, q)`` in I, J or K."""
    model = make_model(model)
    M = model.relation_matrix(kind, np.array([p, q], dtype=float))
    return bool(M[0, 1])
