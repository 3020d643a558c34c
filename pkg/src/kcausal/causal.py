"""K+ as a least fixed point, and checkers for the causal-structure properties built on it."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import relation as rel
from . import topology as top
from .errors import DimensionMismatch, NotKCausal
from .relation import as_mask, as_rel, bool_matmul
from .report import CheckReport
from .topology import FiniteTopology

OUTER_CONTINUITY_NOTE = (
    "outer continuity read as: for every C disjoint from cl F(p) some open U of p keeps C "
    "disjoint from cl F(q) for all q in U"
)


def _restrict(restrict_to, n):
    return np.ones(n, dtype=bool) if restrict_to is None else as_mask(restrict_to, n)


def _check_dims(T, K):
    if K.shape[0] != T.n:
        raise DimensionMismatch(f"relation has dimension {K.shape[0]}, topology has {T.n} points")


def _params(restrict_to, margin, **extra):
    p = {"restricted_points": int(restrict_to.sum())}
    if margin is not None:
        p["margin"] = float(margin)
    p.update(extra)
    return p


@dataclass(frozen=True, eq=False)
class CausalStructure:
    events: object
    topology: FiniteTopology
    chronology: np.ndarray
    kplus: np.ndarray
    iterations: int

    @property
    def n(self):
        return self.kplus.shape[0]

    @property
    def order(self):
        """The partial order p <= q, i.e. K+ with the diagonal added."""
        return rel.reflexive_closure(self.kplus)

    @property
    def radius(self):
        return self.topology.radius

    def default_margin(self):
        return 2.0 * self.radius if self.radius is not None else 0.0

    def margin_mask(self, margin=None):
        if margin is None:
            margin = self.default_margin()
        if self.events is None or not hasattr(self.events, "margin_mask"):
            return np.ones(self.n, dtype=bool)
        return self.events.margin_mask(margin)


def chronology(model, events) -> np.ndarray:
    """I+ on the sampled events from the model's closed-form predicate."""
    I = model.relation_matrix("I", events.events if hasattr(events, "events") else events)
    assert not np.diagonal(I).any(), "chronology must be irreflexive"
    if model.kind != "timelike_cylinder":
        # on the cylinder irreflexivity is a convention and breaks transitivity
        assert rel.is_transitive(I), "analytic chronology must be transitive"
    return I


def k_plus(I, T: FiniteTopology, max_iterations=None):
    """Smallest transitive, topologically closed relation containing ``I``.

    Starts from the transitive closure of ``I`` and alternates closure in the
    product topology with transitive closure until one full alternation adds
    nothing. Returns ``(K, iterations)`` where ``iterations`` counts the
    alternations performed, the last one being the stability check.
    """
    I = as_rel(I)
    _check_dims(T, I)
    n = I.shape[0]
    cap = max_iterations or max(n * n, 1)
    R = rel.transitive_closure(I)
    iterations = 0
    while True:
        nxt = rel.transitive_closure(top.relation_closure(T, R))
        iterations += 1
        if np.array_equal(nxt, R):
            break
        if iterations >= cap:
            raise RuntimeError(f"K+ iteration did not stabilise within {cap} rounds")
        R = nxt
    assert not (I & ~R).any()
    assert rel.is_transitive(R)
    assert np.array_equal(top.relation_closure(T, R), R)
    return R, iterations


def build_structure(events, radius=None, topology=None, I=None) -> CausalStructure:
    """Topology, chronology and K+ for a sampled event set."""
    T = topology if topology is not None else top.build_topology(events, radius)
    if I is None:
        I = chronology(events.model, events)
    K, iterations = k_plus(I, T)
    return CausalStructure(events, T, I, K, iterations)


def is_k_causal(K) -> CheckReport:
    t0 = time.perf_counter()
    K = as_rel(K)
    props = rel.relation_properties(K)
    witness = props.witnesses.get("antisymmetric")
    return CheckReport("k-causal", witness is None, witness, {"n": K.shape[0]},
                       timing={"seconds": time.perf_counter() - t0})


def k_convexity(T: FiniteTopology, K, U) -> bool:
    """``U`` is open and K+(a) & K-(b) stays inside ``U`` for all a, b in ``U``."""
    K = as_rel(K)
    _check_dims(T, K)
    U = as_mask(U, T.n)
    if not T.is_open(U):
        return False
    if not U.any() or U.all():
        return True
    escape = bool_matmul(K[np.ix_(U, ~U)], K[np.ix_(~U, U)])
    return not escape.any()


def strong_k_causality(T: FiniteTopology, K, restrict_to=None, margin=None) -> CheckReport:
    """Every point has K-convex open neighbourhoods inside each generator through it.

    The smallest open K-convex set around ``p`` contains ``N(p)``, and ``N(p)`` is
    the intersection of the generators through ``p``, so the property at ``p``
    holds iff ``N(p)`` itself is K-convex. A failure names ``p`` and a generator
    that the smallest K-convex open set around ``p`` escapes.
    """
    t0 = time.perf_counter()
    K = as_rel(K)
    _check_dims(T, K)
    R = _restrict(restrict_to, T.n)
    N = T.min_nbhd
    failures = []
    for p in np.flatnonzero(R):
        U = N[p]
        outside = K[U].any(axis=0) & K[:, U].any(axis=1) & ~U
        if outside.any():
            z = int(np.flatnonzero(outside)[0])
            V = int(np.flatnonzero(T.generators[:, p] & ~T.generators[:, z])[0])
            failures.append((int(p), V))
    return CheckReport(
        "strong-k-causal", not failures, failures[0] if failures else None,
        _params(R, margin, failures=len(failures)),
        timing={"seconds": time.perf_counter() - t0},
    )


def interior_images(T: FiniteTopology, K, sign="future") -> np.ndarray:
    """Row p holds F(p) = int K+(p) (``future``) or int K-(p) (``past``)."""
    K = as_rel(K)
    _check_dims(T, K)
    if sign == "future":
        return top.interior_rows(T, K)
    if sign == "past":
        return top.interior_rows(T, K.T)
    raise ValueError(f"sign must be 'future' or 'past', got {sign!r}")


def inner_continuity(T: FiniteTopology, K, sign="future", restrict_to=None, margin=None) -> CheckReport:
    """Inner continuity of p -> F(p), tested with the maximal compact C = F(p) and U = N(p)."""
    t0 = time.perf_counter()
    F = interior_images(T, K, sign)
    R = _restrict(restrict_to, T.n)
    # lost[p, q]: something of F(p) is missing from F(q)
    lost = bool_matmul(F, ~F.T)
    bad = T.min_nbhd & lost & R[:, None]
    witness = None
    if bad.any():
        p, q = np.argwhere(bad)[0]
        witness = {"point": int(p), "neighbour": int(q)}
    return CheckReport(f"inner-continuity-{sign}", witness is None, witness,
                       _params(R, margin, sign=sign),
                       timing={"seconds": time.perf_counter() - t0})


def outer_continuity(T: FiniteTopology, K, sign="future", restrict_to=None, margin=None) -> CheckReport:
    """Outer continuity of p -> F(p), tested with the maximal C = complement of cl F(p)."""
    t0 = time.perf_counter()
    F = interior_images(T, K, sign)
    G = top.closure_rows(T, F)
    R = _restrict(restrict_to, T.n)
    # gained[p, q]: cl F(q) reaches outside cl F(p)
    gained = bool_matmul(~G, G.T)
    bad = T.min_nbhd & gained & R[:, None]
    witness = None
    if bad.any():
        p, q = np.argwhere(bad)[0]
        witness = {"point": int(p), "neighbour": int(q)}
    return CheckReport(f"outer-continuity-{sign}", witness is None, witness,
                       _params(R, margin, sign=sign), notes=[OUTER_CONTINUITY_NOTE],
                       timing={"seconds": time.perf_counter() - t0})


def _bits(mask):
    return sum(1 << int(i) for i in np.flatnonzero(mask))


def _subsets(bits):
    """All submasks of an int bitmask, including 0 and ``bits``."""
    sub = bits
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & bits


def _naive_semicontinuity(T, sets_of, candidate_sets, ok, restrict_to, limit):
    n = T.n
    if n > limit:
        raise ValueError(f"naive evaluator refuses {n} points (limit {limit})")
    opens = [_bits(U) for U in T.open_sets(limit)]
    S = [_bits(row) for row in sets_of]
    R = _restrict(restrict_to, n)
    for p in np.flatnonzero(R):
        nbhds = [U for U in opens if (U >> int(p)) & 1]
        members = [[q for q in range(n) if (U >> q) & 1] for U in nbhds]
        for C in _subsets(candidate_sets[p]):
            if not any(all(ok(C, S[q]) for q in qs) for qs in members):
                return int(p)
    return None


def inner_continuity_naive(T, K, sign="future", restrict_to=None, limit=12) -> CheckReport:
    """Definition-level evaluator: every subset C of F(p), every open U through p."""
    F = interior_images(T, K, sign)
    cand = [_bits(row) for row in F]
    p = _naive_semicontinuity(T, F, cand, lambda C, Fq: C & ~Fq == 0, restrict_to, limit)
    return CheckReport(f"inner-continuity-{sign}-naive", p is None, None if p is None else {"point": p},
                       {"sign": sign})


def outer_continuity_naive(T, K, sign="future", restrict_to=None, limit=12) -> CheckReport:
    F = interior_images(T, K, sign)
    G = top.closure_rows(T, F)
    full = (1 << T.n) - 1
    cand = [full & ~_bits(row) for row in G]
    p = _naive_semicontinuity(T, G, cand, lambda C, Gq: C & Gq == 0, restrict_to, limit)
    return CheckReport(f"outer-continuity-{sign}-naive", p is None, None if p is None else {"point": p},
                       {"sign": sign}, notes=[OUTER_CONTINUITY_NOTE])


def lemma32_check(T: FiniteTopology, K, restrict_to=None, margin=None) -> CheckReport:
    """p in int K-(q)  <=>  q in int K+(p), over all pairs of restricted points."""
    t0 = time.perf_counter()
    K = as_rel(K)
    if not rel.is_antisymmetric(K):
        raise NotKCausal("K+ is not antisymmetric", witness=rel.relation_properties(K).witnesses["antisymmetric"])
    fut = interior_images(T, K, "future")
    past = interior_images(T, K, "past")
    R = _restrict(restrict_to, T.n)
    bad = (past.T != fut) & R[:, None] & R[None, :]
    witness = None
    if bad.any():
        p, q = np.argwhere(bad)[0]
        witness = (int(p), int(q))
    return CheckReport("lemma32", witness is None, witness, _params(R, margin),
                       timing={"seconds": time.perf_counter() - t0})


def lemma43_check(K, T: FiniteTopology, restrict_to=None, margin=None,
                  full_limit=150, n_samples=10**6, seed=0) -> CheckReport:
    """Monotonicity of the interior cones along K+, over triples of restricted points.

    (i)  p <= q and r in int K+(q)  =>  r in int K+(p)
    (ii) p in int K-(q) and q <= r  =>  p in int K-(r)

    All triples are covered when at most ``full_limit`` points are involved;
    beyond that ``n_samples`` triples are drawn uniformly with ``seed``.
    """
    t0 = time.perf_counter()
    K = as_rel(K)
    _check_dims(T, K)
    R = _restrict(restrict_to, T.n)
    idx = np.flatnonzero(R)
    W = interior_images(T, K, "future")[np.ix_(idx, idx)]
    X = interior_images(T, K, "past").T[np.ix_(idx, idx)]  # X[p, q]: p in int K-(q)
    L = K[np.ix_(idx, idx)]
    m = len(idx)
    params = _params(R, margin)
    witness = None
    if m <= full_limit:
        params["mode"] = "full"
        params["triples"] = m ** 3
        for part, A, B, C in (("i", L, W, W), ("ii", X, L, X)):
            bad = bool_matmul(A, B) & ~C
            if bad.any():
                p, r = np.argwhere(bad)[0]
                q = int(np.flatnonzero(A[p] & B[:, r])[0])
                cand = (part, int(idx[p]), int(idx[q]), int(idx[r]))
                if witness is None or cand[1:] < witness[1:]:
                    witness = cand
    else:
        rng = np.random.default_rng(seed)
        p, q, r = rng.integers(0, m, size=(3, n_samples))
        params.update(mode="sampled", triples=int(n_samples), seed=int(seed))
        bad_i = L[p, q] & W[q, r] & ~W[p, r]
        bad_ii = X[p, q] & L[q, r] & ~X[p, r]
        for part, bad in (("i", bad_i), ("ii", bad_ii)):
            if bad.any():
                k = np.flatnonzero(bad)
                trip = sorted((int(idx[p[j]]), int(idx[q[j]]), int(idx[r[j]])) for j in k)[0]
                cand = (part,) + trip
                if witness is None or cand[1:] < witness[1:]:
                    witness = cand
    return CheckReport("lemma43", witness is None, witness, params,
                       timing={"seconds": time.perf_counter() - t0})


def _dedupe_rows(blocks, n):
    blocks = [b for b in blocks if len(b)]
    if not blocks:
        return np.zeros((0, n), dtype=bool)
    packed = np.unique(np.vstack(blocks), axis=0)
    return np.unpackbits(packed, axis=1, count=n).astype(bool)


def alexandrov_family(source: CausalStructure, kind="chronological") -> np.ndarray:
    """Basic sets of the Alexandrov (``chronological``) or K-Alexandrov (``k_interior``) topology.

    Rows of the returned ``(m, n)`` array are the nonempty sets
    ``A+(p) & A-(q)`` over all pairs, deduplicated, in sorted packed-bit order.
    """
    n = source.n
    if kind == "chronological":
        fut, past = source.chronology, source.chronology.T
    elif kind == "k_interior":
        fut = interior_images(source.topology, source.kplus, "future")
        past = interior_images(source.topology, source.kplus, "past")
    else:
        raise ValueError(f"unknown Alexandrov family {kind!r}")
    blocks = []
    for p in range(n):
        rows = fut[p][None, :] & past
        rows = rows[rows.any(axis=1)]
        if len(rows):
            blocks.append(np.packbits(rows, axis=1))
    return _dedupe_rows(blocks, n)
