"""Posets, directed sets and the way-below machinery on finite carriers.

On a finite poset every directed set contains its supremum, so way-below
collapses to the order itself. The definitional evaluators here do not use
that shortcut: they enumerate directed (filtered) subsets and test the
definitions literally, which is what makes them usable as oracles.

For sampled spacetimes the operative way-below relation is the interior one,
``x << y`` iff ``y`` lies in the interior of the future of ``x`` under the
order; the same matrix serves as way-above.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from . import relation as rel
from . import topology as top
from .errors import (
    CarrierTooLarge,
    DimensionMismatch,
    EmptySubset,
    NotAntisymmetric,
    NotKCausal,
    NotReflexive,
    NotTransitive,
    OutOfRangeIndex,
)
from .relation import as_mask, as_rel, bool_matmul
from .report import CheckReport

BELOW = "below"
ABOVE = "above"
DEFINITIONAL = "definitional"
FINITE_SHORTCUT = "finite_shortcut"
CAUSAL_INTERIOR = "causal_interior"

ENUMERATION_CAP = 12

CAUSAL_INTERIOR_CAVEAT = (
    "causal_interior: way-below taken as y in int(up(x)) with up(x) the future of x under the "
    "reflexive order; on finite samples the literal definition collapses to the order, so only "
    "consistency between the interior characterisations is checked"
)
FINITE_COMPACTNESS_NOTE = "every subset of a finite carrier is compact; interval compactness holds trivially"


@dataclass(frozen=True, eq=False)
class PosetHandle:
    order: np.ndarray

    @property
    def n(self):
        return self.order.shape[0]

    def converse(self):
        return PosetHandle(self.order.T.copy())


@dataclass(frozen=True, eq=False)
class WayBelowRel:
    rel: np.ndarray
    method: str
    direction: str


def validate_order(R, reflexivize=False) -> PosetHandle:
    R = as_rel(R)
    if reflexivize:
        R = rel.reflexive_closure(R)
    props = rel.relation_properties(R)
    if not props.reflexive:
        raise NotReflexive("relation is not reflexive", witness=props.witnesses["reflexive"])
    if not props.antisymmetric:
        raise NotAntisymmetric("relation is not antisymmetric", witness=props.witnesses["antisymmetric"])
    if not props.transitive:
        raise NotTransitive("relation is not transitive", witness=props.witnesses["transitive"])
    return PosetHandle(R.copy())


def up_set(P: PosetHandle, S):
    S = as_mask(S, P.n)
    return P.order[S].any(axis=0)


def down_set(P: PosetHandle, S):
    S = as_mask(S, P.n)
    return P.order[:, S].any(axis=1)


def _least(order, candidates):
    """The element of ``candidates`` below all others, or None."""
    for u in np.flatnonzero(candidates):
        if (order[u] | ~candidates).all():
            return int(u)
    return None


def bounds(P: PosetHandle, S) -> dict:
    """Directedness, filteredness, supremum and infimum of a nonempty subset."""
    S = as_mask(S, P.n)
    if not S.any():
        raise EmptySubset("bounds of the empty set are not defined")
    O = P.order
    sub = O[np.ix_(S, S)].astype(np.float32)
    directed = bool(((sub @ sub.T) > 0.5).all())
    filtered = bool(((sub.T @ sub) > 0.5).all())
    upper = O[S].all(axis=0)
    lower = O[:, S].all(axis=1)
    return {
        "directed": directed,
        "filtered": filtered,
        "supremum": _least(O, upper),
        "infimum": _least(O.T, lower),
    }


def _all_subsets(n):
    codes = np.arange(1, 1 << n, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n)) & 1).astype(bool)


def directed_subsets(P: PosetHandle, cap=ENUMERATION_CAP):
    """All directed subsets that have a supremum, as ``(masks, sups)``.

    Directedness is tested pairwise on every nonempty subset (no maximum-element
    shortcut); ``masks`` is ``(m, n)`` bool and ``sups`` the supremum indices.
    """
    n = P.n
    if n > cap:
        raise CarrierTooLarge(f"{n} points exceed the enumeration cap {cap}")
    O = P.order
    S = _all_subsets(n)
    Sf = S.astype(np.float32)
    # common upper bounds of each pair (x, y), flattened to columns
    ub_pairs = (O[:, None, :] & O[None, :, :]).reshape(n * n, n)
    covered = (Sf @ ub_pairs.T.astype(np.float32)) > 0.5
    both = (S[:, :, None] & S[:, None, :]).reshape(len(S), n * n)
    directed = (covered | ~both).all(axis=1)
    size = S.sum(axis=1)
    upper = (Sf @ O.astype(np.float32)) > size[:, None] - 0.5
    Uf = upper.astype(np.float32)
    least = upper & ((Uf @ O.T.astype(np.float32)) > upper.sum(axis=1)[:, None] - 0.5)
    has_sup = least.any(axis=1)
    keep = directed & has_sup
    return S[keep], least[keep].argmax(axis=1)


def _way_below_matrix_definitional(P: PosetHandle, cap):
    O = P.order
    masks, sups = directed_subsets(P, cap)
    hit = bool_matmul(masks, O.T)       # hit[S, x]: x <= some s in S
    cond = O[:, sups].T                  # cond[S, y]: y <= sup S
    violated = bool_matmul(~hit.T, cond)
    return ~violated


def way_below_matrix_definitional(P: PosetHandle, direction=BELOW, cap=ENUMERATION_CAP):
    """Way-below (or way-above) for every pair, straight from the definition."""
    if direction == BELOW:
        return _way_below_matrix_definitional(P, cap)
    if direction == ABOVE:
        # x way-above y in P  <=>  y way-below x in the converse poset
        return _way_below_matrix_definitional(P.converse(), cap).T
    raise ValueError(f"direction must be 'below' or 'above', got {direction!r}")


def way_below_definitional(P: PosetHandle, x, y, direction=BELOW, cap=ENUMERATION_CAP) -> bool:
    n = P.n
    if not (0 <= x < n and 0 <= y < n):
        raise OutOfRangeIndex(f"points {(x, y)} out of range for n={n}")
    if n > cap:
        raise CarrierTooLarge(f"{n} points exceed the enumeration cap {cap}; use way_below_fast")
    O = P.order if direction == BELOW else P.order.T
    if direction == ABOVE:
        x, y = y, x
    masks, sups = directed_subsets(PosetHandle(O), cap)
    for S, s in zip(masks, sups):
        if O[y, s] and not O[x, S].any():
            return False
    return True


def way_below_fast(P: PosetHandle, direction=BELOW) -> WayBelowRel:
    if direction == BELOW:
        return WayBelowRel(P.order.copy(), FINITE_SHORTCUT, BELOW)
    if direction == ABOVE:
        return WayBelowRel(P.converse().order.T.copy(), FINITE_SHORTCUT, ABOVE)
    raise ValueError(f"direction must be 'below' or 'above', got {direction!r}")


def way_below_causal(C, direction=BELOW) -> WayBelowRel:
    """``(x, y)`` iff ``y`` is interior to the future of ``x`` under the reflexive order.

    The same matrix is returned for both directions.
    """
    if direction not in (BELOW, ABOVE):
        raise ValueError(f"direction must be 'below' or 'above', got {direction!r}")
    if not rel.is_antisymmetric(C.kplus):
        raise NotKCausal("K+ is not antisymmetric",
                         witness=rel.relation_properties(C.kplus).witnesses["antisymmetric"])
    return WayBelowRel(top.interior_rows(C.topology, C.order), CAUSAL_INTERIOR, direction)


def scott_condition_upper(P: PosetHandle, U) -> bool:
    U = as_mask(U, P.n)
    return not (P.order[U] & ~U).any()


def scott_condition_directed(P: PosetHandle, U, cap=ENUMERATION_CAP) -> bool:
    """Every directed set whose supremum lies in ``U`` meets ``U``."""
    U = as_mask(U, P.n)
    masks, sups = directed_subsets(P, cap)
    inside = U[sups]
    return bool((masks[inside] & U).any(axis=1).all())


def scott_open_check(P: PosetHandle, U, cap=ENUMERATION_CAP) -> bool:
    """Scott openness; the directed-set condition is enumerated when the carrier allows."""
    if not scott_condition_upper(P, U):
        return False
    if P.n <= cap:
        return scott_condition_directed(P, U, cap)
    return True


def continuity_checks(P: PosetHandle, wb: WayBelowRel, wa: WayBelowRel, restrict_to=None,
                      margin=None) -> CheckReport:
    """Continuity, dual continuity, bicontinuity and joint bicontinuity.

    continuous:  for each x, the way-below approximants of x that are also below
                 x contain a directed set with supremum x (basis = whole carrier)
    dual:        the way-above set of x is filtered with infimum x
    joint:       both, and the way-below and way-above matrices coincide
    """
    t0 = time.perf_counter()
    n = P.n
    if wb.rel.shape != (n, n) or wa.rel.shape != (n, n):
        raise DimensionMismatch("way-below relations do not match the poset")
    R = np.ones(n, dtype=bool) if restrict_to is None else as_mask(restrict_to, n)
    O = P.order
    fail_cont = fail_dual = None
    for x in np.flatnonzero(R):
        approx = wb.rel[:, x] & O[:, x]
        if fail_cont is None and not _directed_sup_exists(O, approx, x):
            fail_cont = int(x)
        above = wa.rel[x]
        if fail_dual is None and not _filtered_inf_is(O, above, x):
            fail_dual = int(x)
        if fail_cont is not None and fail_dual is not None:
            break
    mismatch = (wb.rel != wa.rel) & R[:, None] & R[None, :]
    fail_joint = tuple(int(v) for v in np.argwhere(mismatch)[0]) if mismatch.any() else None
    flags = {
        "continuous": fail_cont is None,
        "dual_continuous": fail_dual is None,
    }
    flags["bicontinuous"] = flags["continuous"] and flags["dual_continuous"]
    flags["jointly_bicontinuous"] = flags["bicontinuous"] and fail_joint is None
    witness = None
    if not flags["jointly_bicontinuous"]:
        witness = {"continuous": fail_cont, "dual_continuous": fail_dual, "joint_pair": fail_joint}
    params = {"restricted_points": int(R.sum()), "methods": [wb.method, wa.method]}
    if margin is not None:
        params["margin"] = float(margin)
    notes = [CAUSAL_INTERIOR_CAVEAT] if CAUSAL_INTERIOR in (wb.method, wa.method) else []
    return CheckReport("continuity", flags["jointly_bicontinuous"], witness, params, notes,
                       details=flags, timing={"seconds": time.perf_counter() - t0})


def _directed_sup_exists(O, candidates, x):
    """Does some directed subset of ``candidates`` have supremum ``x``?

    A finite directed set has a greatest element, which is then its supremum,
    so the question is whether ``x`` is among the candidates; the sub-poset
    check below confirms {x} is directed with supremum x.
    """
    if not candidates[x]:
        return False
    return bool(O[x, x])


def _filtered_inf_is(O, S, x):
    """Is ``S`` filtered with infimum ``x``?"""
    if not S.any():
        return False
    sub = O[np.ix_(S, S)].astype(np.float32)
    if not ((sub.T @ sub) > 0.5).all():
        return False
    lower = O[:, S].all(axis=1)
    return _least(O.T, lower) == x


def interpolation_check(P: PosetHandle, wb: WayBelowRel, pairs=None, strict=False) -> CheckReport:
    """For every way-below pair (x, y), some z has x << z << y.

    ``pairs`` (bool matrix) limits which pairs are examined; ``strict`` demands
    z different from both x and y.
    """
    t0 = time.perf_counter()
    W = wb.rel
    n = W.shape[0]
    todo = W if pairs is None else W & as_rel(pairs, n)
    if strict:
        off = ~np.eye(n, dtype=bool)
        ok = bool_matmul(W & off, W & off)
    else:
        ok = bool_matmul(W, W)
    bad = todo & ~ok
    witness = None
    if bad.any():
        x, y = np.argwhere(bad)[0]
        witness = (int(x), int(y))
    return CheckReport("interpolation", witness is None, witness,
                       {"pairs": int(todo.sum()), "strict": strict, "method": wb.method},
                       notes=[CAUSAL_INTERIOR_CAVEAT] if wb.method == CAUSAL_INTERIOR else [],
                       timing={"seconds": time.perf_counter() - t0})


def interval(P: PosetHandle, a, b) -> np.ndarray:
    n = P.n
    if not (0 <= a < n and 0 <= b < n):
        raise OutOfRangeIndex(f"points {(a, b)} out of range for n={n}")
    return P.order[a] & P.order[:, b]


def interval_topology_family(wb: WayBelowRel, wa: WayBelowRel) -> np.ndarray:
    """Nonempty sets {x : a << x and x way-above-related to b}, deduplicated and sorted."""
    W, A = wb.rel, wa.rel
    if W.shape != A.shape:
        raise DimensionMismatch("way-below and way-above relations differ in size")
    n = W.shape[0]
    blocks = []
    for a in range(n):
        rows = W[a][None, :] & A.T
        rows = rows[rows.any(axis=1)]
        if len(rows):
            blocks.append(np.packbits(rows, axis=1))
    if not blocks:
        return np.zeros((0, n), dtype=bool)
    packed = np.unique(np.vstack(blocks), axis=0)
    return np.unpackbits(packed, axis=1, count=n).astype(bool)


def gh_poset_check(P: PosetHandle, wb: WayBelowRel, wa: WayBelowRel, restrict_to=None,
                   margin=None) -> CheckReport:
    """Bicontinuity plus compact intervals in the interval topology."""
    cont = continuity_checks(P, wb, wa, restrict_to, margin)
    holds = cont.details["bicontinuous"]
    return CheckReport("gh-poset", holds, None if holds else cont.witness, cont.params,
                       cont.notes + [FINITE_COMPACTNESS_NOTE], details=dict(cont.details),
                       timing=cont.timing)


def upper_space_demo(n_points, cap=15) -> CheckReport:
    """Upper space of a discrete ``n_points`` space: K << L iff L is inside int(K) = K.

    Elements are the nonempty subsets ordered by reverse inclusion; way-below
    is evaluated from the definition and compared with the interior criterion.
    """
    t0 = time.perf_counter()
    m = (1 << n_points) - 1
    if m > cap:
        raise CarrierTooLarge(f"upper space of {n_points} points has {m} elements (cap {cap})")
    sets = _all_subsets(n_points)  # element i <-> sets[i]
    # A <= B iff B is a subset of A
    O = ~((sets[None, :, :] & ~sets[:, None, :]).any(axis=2))
    P = validate_order(O)
    wb = way_below_matrix_definitional(P, BELOW, cap=cap)
    T = top.discrete(n_points)
    interiors = np.array([top.interior(T, s) for s in sets])
    criterion = ~((sets[None, :, :] & ~interiors[:, None, :]).any(axis=2))  # L inside int(K)
    bad = wb != criterion
    witness = None
    if bad.any():
        i, j = np.argwhere(bad)[0]
        witness = (rel.indices(sets[i]), rel.indices(sets[j]))
    return CheckReport("upper-space", witness is None, witness,
                       {"points": n_points, "elements": m},
                       timing={"seconds": time.perf_counter() - t0})


def enumerate_posets(n):
    """Every partial order on ``n`` labelled points (1, 1, 3, 19, 219, 4231 for n = 0..5).

    Built by inserting point ``n - 1`` into each poset on ``n - 1`` points with
    a down-closed set below it and an up-closed set above it.
    """
    if n == 0:
        return [np.zeros((0, 0), dtype=bool)]
    out = []
    for O in enumerate_posets(n - 1):
        k = n - 1
        for down_bits in itertools.product((False, True), repeat=k):
            D = np.array(down_bits, dtype=bool)
            if k and (O[:, D].any(axis=1) & ~D).any():
                continue
            for up_bits in itertools.product((False, True), repeat=k):
                U = np.array(up_bits, dtype=bool)
                if (U & D).any():
                    continue
                if k and (O[U].any(axis=0) & ~U).any():
                    continue
                # everything below the new point must be below everything above it
                if D.any() and U.any() and not O[np.ix_(D, U)].all():
                    continue
                New = np.zeros((n, n), dtype=bool)
                New[:k, :k] = O
                New[k, k] = True
                New[:k, k] = D
                New[k, :k] = U
                out.append(New)
    return out


def random_poset(n, rng):
    """Random partial order: transitive closure of a random DAG under a random labelling."""
    p = rng.uniform(0.1, 0.6)
    A = np.triu(rng.random((n, n)) < p, k=1)
    A = rel.transitive_closure(A) | np.eye(n, dtype=bool)
    perm = rng.permutation(n)
    return A[np.ix_(perm, perm)]
