"""Dense boolean relations on ``n`` points.

A relation is an ``(n, n)`` numpy bool array: ``R[i, j]`` is true iff the pair
``(i, j)`` belongs to it. Row ``i`` is the future image of ``i``, column ``j``
the past image of ``j``. Point sets are length-``n`` bool masks; functions
that take a point set also accept any iterable of indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, OutOfRangeIndex

FUTURE = "future"
PAST = "past"


def as_rel(R, n=None) -> np.ndarray:
    R = np.asarray(R, dtype=bool)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise DimensionMismatch(f"relation must be square, got shape {R.shape}")
    if n is not None and R.shape[0] != n:
        raise DimensionMismatch(f"relation has dimension {R.shape[0]}, expected {n}")
    return R


def as_mask(S, n) -> np.ndarray:
    """Normalise a point set (bool mask or iterable of indices) to a bool mask."""
    if isinstance(S, np.ndarray) and S.dtype == bool:
        if S.shape != (n,):
            raise DimensionMismatch(f"point set has shape {S.shape}, expected ({n},)")
        return S
    mask = np.zeros(n, dtype=bool)
    idx = np.fromiter((int(i) for i in S), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise OutOfRangeIndex(f"point index out of range for carrier of size {n}")
    mask[idx] = True
    return mask


def indices(mask) -> set[int]:
    return {int(i) for i in np.flatnonzero(mask)}


def check_same_dim(*rels):
    dims = {r.shape[0] for r in rels}
    if len(dims) != 1:
        raise DimensionMismatch(f"relations of different dimensions: {sorted(dims)}")
    return dims.pop()


def empty(n):
    return np.zeros((n, n), dtype=bool)


def identity(n):
    return np.eye(n, dtype=bool)


def total(n):
    return np.ones((n, n), dtype=bool)


def from_pairs(pairs, n):
    R = empty(n)
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise OutOfRangeIndex(f"pair {(i, j)} out of range for n={n}")
        R[i, j] = True
    return R


def to_pairs(R):
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(R))]


def bool_matmul(A, B) -> np.ndarray:
    """Boolean matrix product via float32 BLAS; exact while the inner dimension < 2**24."""
    return (A.astype(np.float32) @ B.astype(np.float32)) > 0.5


def _closure_squaring(R):
    while True:
        R2 = R | bool_matmul(R, R)
        if np.array_equal(R2, R):
            return R2
        R = R2


def _closure_warshall(R):
    R = R.copy()
    for k in range(R.shape[0]):
        rows = R[:, k]
        if rows.any():
            R[rows] |= R[k]
    return R


def transitive_closure(R, method="squaring") -> np.ndarray:
    """Smallest transitive relation containing ``R``.

    ``method`` is ``"squaring"`` (iterate R <- R | R.R, logarithmically many
    rounds) or ``"warshall"`` (row propagation through each pivot).
    """
    R = as_rel(R)
    if method == "squaring":
        return _closure_squaring(R.copy())
    if method == "warshall":
        return _closure_warshall(R)
    raise ValueError(f"unknown closure method {method!r}")


def reflexive_closure(R):
    R = as_rel(R)
    return R | identity(R.shape[0])


def strict_part(R):
    R = as_rel(R)
    return R & ~identity(R.shape[0])


def transitive_reduction(R):
    """Covering pairs of the strict part of a transitive, antisymmetric ``R``."""
    S = strict_part(R)
    return S & ~bool_matmul(S, S)


def is_transitive(R):
    return not (bool_matmul(R, R) & ~R).any()


def is_antisymmetric(R):
    return not (strict_part(R) & R.T).any()


def _smallest_intransitive_triple(R):
    bad = bool_matmul(R, R) & ~R
    rows = np.flatnonzero(bad.any(axis=1))
    if rows.size == 0:
        return None
    a = int(rows[0])
    for b in np.flatnonzero(R[a]):
        cs = np.flatnonzero(R[b] & ~R[a])
        if cs.size:
            return (a, int(b), int(cs[0]))
    raise AssertionError("unreachable: violation row without witness")


@dataclass
class RelationProperties:
    reflexive: bool
    irreflexive: bool
    transitive: bool
    antisymmetric: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def partial_order(self):
        return self.reflexive and self.transitive and self.antisymmetric


def relation_properties(R) -> RelationProperties:
    """Evaluate the four basic properties; failed ones get the smallest witness."""
    R = as_rel(R)
    n = R.shape[0]
    diag = np.diagonal(R)
    w = {}
    if n and not diag.all():
        i = int(np.flatnonzero(~diag)[0])
        w["reflexive"] = (i, i)
    if diag.any():
        i = int(np.flatnonzero(diag)[0])
        w["irreflexive"] = (i, i)
    sym = strict_part(R) & R.T
    if sym.any():
        p, q = np.argwhere(sym)[0]
        w["antisymmetric"] = (int(p), int(q))
    triple = _smallest_intransitive_triple(R)
    if triple is not None:
        w["transitive"] = triple
    return RelationProperties(
        reflexive="reflexive" not in w,
        irreflexive="irreflexive" not in w,
        transitive="transitive" not in w,
        antisymmetric="antisymmetric" not in w,
        witnesses=w,
    )


def image(R, p, direction=FUTURE) -> np.ndarray:
    """Future image ``{q : (p,q) in R}`` or past image ``{q : (q,p) in R}`` as a mask."""
    R = as_rel(R)
    n = R.shape[0]
    if not 0 <= p < n:
        raise OutOfRangeIndex(f"point {p} out of range for n={n}")
    if direction == FUTURE:
        return R[p].copy()
    if direction == PAST:
        return R[:, p].copy()
    raise ValueError(f"direction must be 'future' or 'past', got {direction!r}")


def compose(R, S):
    """``{(x, z) : exists y, (x, y) in R and (y, z) in S}``."""
    check_same_dim(as_rel(R), as_rel(S))
    return bool_matmul(R, S)


def relation_ops(R, S, op) -> np.ndarray:
    R, S = as_rel(R), as_rel(S)
    check_same_dim(R, S)
    if op == "union":
        return R | S
    if op == "intersect":
        return R & S
    if op == "difference":
        return R & ~S
    if op == "compose":
        return bool_matmul(R, S)
    raise ValueError(f"unknown relation op {op!r}")
