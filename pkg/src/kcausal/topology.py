"""Finite topologies described by minimal neighbourhoods.

On a finite carrier every point ``x`` has a smallest open set ``N(x)``, the
intersection of all generating sets that contain it. A set ``U`` is open iff
``N(x) <= U`` for all ``x`` in ``U``, so the table ``N`` (stored as an
``(n, n)`` bool matrix, row ``x`` = ``N(x)``) determines everything:

* interior(S) = {x in S : N(x) <= S}
* closure(S)  = {x : N(x) meets S}
* closure of a relation R in the product topology = N . R . N^T
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyEventSet, NonCoveringFamily
from .relation import as_mask, as_rel, bool_matmul
from .report import CheckReport

# relative slack applied to ball radii so lattice points at exactly the radius count as inside
RADIUS_RTOL = 1e-9


def _min_nbhd_from_family(F, n):
    """N[x, y] iff every set of F containing x also contains y (carrier added implicitly)."""
    F = np.asarray(F, dtype=bool).reshape(-1, n)
    if F.shape[0] == 0:
        return np.ones((n, n), dtype=bool)
    return ~bool_matmul(F.T, ~F)


@dataclass(frozen=True, eq=False)
class FiniteTopology:
    generators: np.ndarray
    min_nbhd: np.ndarray
    radius: float | None = None

    @property
    def n(self):
        return self.min_nbhd.shape[0]

    @property
    def is_discrete(self):
        return bool(np.array_equal(self.min_nbhd, np.eye(self.n, dtype=bool)))

    def is_open(self, S):
        S = as_mask(S, self.n)
        return not (self.min_nbhd[S] & ~S).any()

    def open_sets(self, limit=16):
        """Yield every open set as a mask. Exponential; refuses carriers above ``limit``."""
        n = self.n
        if n > limit:
            raise ValueError(f"refusing to enumerate open sets of a {n}-point space")
        N = self.min_nbhd
        for bits in range(1 << n):
            S = np.array([(bits >> i) & 1 for i in range(n)], dtype=bool)
            if not (N[S] & ~S).any():
                yield S


def _points_array(events):
    if hasattr(events, "events"):
        return np.asarray(events.events, dtype=float)
    pts = np.asarray(events, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    return pts


def _distances(events):
    if hasattr(events, "distance_matrix"):
        return events.distance_matrix()
    pts = _points_array(events)
    return np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)


def default_radius(events):
    """Twice the largest nearest-neighbour distance."""
    d = _distances(events)
    n = d.shape[0]
    if n < 2:
        return 1.0
    d = d + np.diag(np.full(n, np.inf))
    return float(2.0 * d.min(axis=1).max())


def build_topology(events=None, radius=None, *, generators=None, n=None) -> FiniteTopology:
    """Topology generated (as a subbasis) by closed ball traces or by explicit sets.

    With ``events`` the generators are the traces ``{y : d(x, y) <= radius}`` of
    the ball around every event, in event order; ``radius`` defaults to
    :func:`default_radius`. With ``generators`` (an iterable of point sets, or a
    ``(g, n)`` bool array) the carrier size is ``n`` or inferred from ``events``.
    """
    if generators is not None:
        if n is None:
            if events is None:
                raise ValueError("carrier size n is required with explicit generators")
            n = len(_points_array(events))
        if n == 0:
            raise EmptyEventSet("empty carrier")
        if isinstance(generators, np.ndarray) and generators.dtype == bool and generators.ndim == 2:
            G = generators.copy()
            if G.shape[1] != n:
                raise DimensionMismatch(f"generators have width {G.shape[1]}, expected {n}")
        else:
            G = np.array([as_mask(S, n) for S in generators], dtype=bool).reshape(-1, n)
        uncovered = np.flatnonzero(~G.any(axis=0))
        if uncovered.size:
            raise NonCoveringFamily(f"point {uncovered[0]} lies in no generator", witness=int(uncovered[0]))
        return FiniteTopology(G, _min_nbhd_from_family(G, n), None)

    if events is None:
        raise ValueError("either events or generators is required")
    d = _distances(events)
    if d.shape[0] == 0:
        raise EmptyEventSet("no events")
    if radius is None:
        radius = default_radius(events)
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    G = d <= radius * (1 + RADIUS_RTOL)
    return FiniteTopology(G, _min_nbhd_from_family(G, d.shape[0]), float(radius))


def from_min_nbhd(N) -> FiniteTopology:
    """Topology whose minimal neighbourhoods are the rows of a preorder matrix."""
    N = as_rel(N)
    if not np.diagonal(N).all() or (bool_matmul(N, N) & ~N).any():
        raise ValueError("minimal-neighbourhood table must be reflexive and transitive")
    return FiniteTopology(N.copy(), N.copy(), None)


def discrete(n):
    return from_min_nbhd(np.eye(n, dtype=bool))


def indiscrete(n):
    return build_topology(generators=np.ones((1, n), dtype=bool), n=n)


def interior(T: FiniteTopology, S) -> np.ndarray:
    S = as_mask(S, T.n)
    return S & ~(T.min_nbhd & ~S).any(axis=1)


def closure_set(T: FiniteTopology, S) -> np.ndarray:
    S = as_mask(S, T.n)
    return (T.min_nbhd & S).any(axis=1)


def interior_rows(T: FiniteTopology, R) -> np.ndarray:
    """Row-wise interior: result[i] = interior(T, R[i])."""
    R = as_rel(R, T.n)
    return ~bool_matmul(~R, T.min_nbhd.T)


def closure_rows(T: FiniteTopology, R) -> np.ndarray:
    """Row-wise set closure: result[i] = closure_set(T, R[i])."""
    R = as_rel(R, T.n)
    return bool_matmul(R, T.min_nbhd.T)


def relation_closure(T: FiniteTopology, R) -> np.ndarray:
    """Closure of ``R`` in the product topology: pairs whose N(x) x N(y) meets R."""
    R = as_rel(R, T.n)
    N = T.min_nbhd
    return bool_matmul(bool_matmul(N, R), N.T)


def topologies_equivalent(F1, F2, restrict_to=None, n=None, labels=("left", "right")) -> CheckReport:
    """Do two generating families induce the same topology on ``restrict_to``?

    Each family generates a topology (as a subbasis, together with the whole
    carrier); both are traced on ``restrict_to`` and compared through their
    minimal neighbourhoods. On failure the witness names the point, the index
    of a set of one family that is not open for the other, and the direction.
    """
    F1 = np.asarray(F1, dtype=bool)
    F2 = np.asarray(F2, dtype=bool)
    if n is None:
        widths = {F.shape[1] for F in (F1, F2) if F.ndim == 2 and F.size}
        if len(widths) != 1:
            raise DimensionMismatch("cannot infer a common carrier size")
        n = widths.pop()
    F1 = F1.reshape(-1, n)
    F2 = F2.reshape(-1, n)
    R = np.ones(n, dtype=bool) if restrict_to is None else as_mask(restrict_to, n)
    N1 = _min_nbhd_from_family(F1, n) & R
    N2 = _min_nbhd_from_family(F2, n) & R
    params = {"n": n, "restricted_points": int(R.sum()), "sizes": [int(F1.shape[0]), int(F2.shape[0])]}
    for x in np.flatnonzero(R):
        if np.array_equal(N1[x], N2[x]):
            continue
        # N2(x) not inside N1(x): some F1 set through x is not open for F2
        if (N2[x] & ~N1[x]).any():
            src, other, direction = F1, N2[x], f"{labels[0]} set not open in {labels[1]} topology"
        else:
            src, other, direction = F2, N1[x], f"{labels[1]} set not open in {labels[0]} topology"
        through = np.flatnonzero(src[:, x] & (other & ~src).any(axis=1))
        witness = {"point": int(x), "set_index": int(through[0]), "direction": direction}
        return CheckReport("topologies-equivalent", False, witness, params)
    return CheckReport("topologies-equivalent", True, None, params)


def all_preorder_topologies(n):
    """Every topology on ``n`` labelled points, as FiniteTopology objects (29 for n=3)."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for bits in itertools.product((False, True), repeat=len(off)):
        Q = np.eye(n, dtype=bool)
        for (i, j), b in zip(off, bits):
            Q[i, j] = b
        if not (bool_matmul(Q, Q) & ~Q).any():
            out.append(from_min_nbhd(Q))
    return out
