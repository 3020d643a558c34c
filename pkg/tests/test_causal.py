import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as hst
from hypothesis.extra.numpy import arrays

from kcausal import causal
from kcausal import relation as rel
from kcausal import spacetimes as st
from kcausal import topology as top
from kcausal.errors import DimensionMismatch, NotKCausal

from conftest import structure
from oracles import kplus_brute, reach_bfs, topology_opens


@hst.composite
def topo_and_relation(draw, max_n=6, irreflexive=True):
    n = draw(hst.integers(1, max_n))
    G = draw(arrays(bool, (draw(hst.integers(1, 4)), n)))
    G[0] |= ~G.any(axis=0)
    T = top.build_topology(generators=G, n=n)
    I = draw(arrays(bool, (n, n)))
    if irreflexive:
        np.fill_diagonal(I, False)
    return T, I


def test_discrete_gives_transitive_closure_in_one_round(rng):
    I = rng.random((8, 8)) < 0.25
    np.fill_diagonal(I, False)
    K, it = causal.k_plus(I, top.discrete(8))
    assert it == 1
    assert set(rel.to_pairs(K)) == reach_bfs(I.tolist())


def test_indiscrete_gives_total():
    I = rel.from_pairs([(0, 1)], 4)
    K, _ = causal.k_plus(I, top.indiscrete(4))
    assert K.all()
    K0, _ = causal.k_plus(rel.empty(4), top.indiscrete(4))
    assert not K0.any()


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        causal.k_plus(rel.empty(3), top.discrete(4))


@given(topo_and_relation())
def test_certificate(case):
    T, I = case
    K, it = causal.k_plus(I, T)
    assert not (I & ~K).any()
    assert rel.is_transitive(K)
    assert np.array_equal(top.relation_closure(T, K), K)
    assert 1 <= it <= max(T.n ** 2, 1)


@given(topo_and_relation(max_n=3))
def test_minimal_against_exhaustive_search(case):
    T, I = case
    n = T.n
    opens = topology_opens([set(np.flatnonzero(g)) for g in T.generators], n)
    K, _ = causal.k_plus(I, T)
    assert set(rel.to_pairs(K)) == kplus_brute(set(rel.to_pairs(I)), opens, n)


@given(topo_and_relation(), hst.data())
def test_monotone_in_relation_and_topology(case, data):
    T, I = case
    n = T.n
    extra = data.draw(arrays(bool, (n, n)))
    K1, _ = causal.k_plus(I, T)
    K2, _ = causal.k_plus(I | extra, T)
    assert not (K1 & ~K2).any()
    # coarser topologies (larger minimal neighbourhoods) give larger K
    assert not (K1 & ~causal.k_plus(I, top.indiscrete(n))[0]).any()
    grown = rel.transitive_closure(T.min_nbhd | data.draw(arrays(bool, (n, n))))
    coarser = top.from_min_nbhd(grown | np.eye(n, dtype=bool))
    assert not (K1 & ~causal.k_plus(I, coarser)[0]).any()


def test_chronology_and_structure_minkowski():
    C = structure("minkowski-grid-20")
    assert not np.diagonal(C.chronology).any()
    assert rel.is_transitive(C.chronology)
    assert C.iterations >= 1


def test_k_causal_examples():
    assert causal.is_k_causal(rel.identity(4)).holds
    rep = causal.is_k_causal(structure("cylinder-grid-6").kplus)
    assert not rep.holds
    p, q = rep.witness
    assert p < q


def test_k_convexity_basic():
    T = top.discrete(3)
    K = rel.transitive_closure(rel.from_pairs([(0, 1), (1, 2)], 3))
    assert causal.k_convexity(T, K, [0, 1, 2])
    assert not causal.k_convexity(T, K, [0, 2])
    assert causal.k_convexity(T, K, [0, 1])
    # not open -> not convex
    T2 = top.indiscrete(3)
    assert not causal.k_convexity(T2, K, [0])


def test_strong_k_causality():
    assert causal.strong_k_causality(structure("minkowski-grid-20").topology,
                                     structure("minkowski-grid-20").kplus).holds
    C = structure("cylinder-grid-6")
    rep = causal.strong_k_causality(C.topology, C.kplus)
    assert not rep.holds
    p, V = rep.witness
    assert C.topology.generators[V, p]


@given(topo_and_relation(max_n=6), hst.sampled_from(["future", "past"]))
def test_continuity_checkers_agree_with_naive(case, sign):
    T, I = case
    K, _ = causal.k_plus(I, T)
    for fast, naive in ((causal.inner_continuity, causal.inner_continuity_naive),
                        (causal.outer_continuity, causal.outer_continuity_naive)):
        a = fast(T, K, sign)
        b = naive(T, K, sign)
        assert a.holds == b.holds
        if not a.holds:
            assert a.witness["point"] == b.witness["point"]


@given(topo_and_relation(max_n=6, irreflexive=False), hst.sampled_from(["future", "past"]))
def test_continuity_checkers_agree_on_arbitrary_relations(case, sign):
    T, R = case
    assert causal.inner_continuity(T, R, sign).holds == causal.inner_continuity_naive(T, R, sign).holds
    assert causal.outer_continuity(T, R, sign).holds == causal.outer_continuity_naive(T, R, sign).holds


def test_continuity_on_discrete_topology(rng):
    K = rng.random((6, 6)) < 0.4
    T = top.discrete(6)
    for sign in ("future", "past"):
        assert causal.inner_continuity(T, K, sign).holds
        assert causal.outer_continuity(T, K, sign).holds


def test_lemma32_discrete_and_precondition():
    K = rel.transitive_closure(rel.from_pairs([(0, 1), (1, 2)], 3))
    assert causal.lemma32_check(top.discrete(3), K).holds
    with pytest.raises(NotKCausal):
        causal.lemma32_check(top.discrete(2), rel.total(2))


def test_lemma43_identity_and_negative_control():
    assert causal.lemma43_check(rel.identity(5), top.discrete(5)).holds
    # remove one pair from a transitive K: the triple through the gap must be flagged
    K = rel.transitive_closure(rel.from_pairs([(0, 1), (1, 2)], 3)) | np.eye(3, dtype=bool)
    K[0, 2] = False
    rep = causal.lemma43_check(K, top.discrete(3))
    assert not rep.holds
    part, p, q, r = rep.witness
    assert (p, q, r) == (0, 1, 2)


def test_lemma43_sampled_mode_records_seed():
    C = structure("minkowski-grid-20")
    rep = causal.lemma43_check(C.kplus, C.topology, full_limit=10, n_samples=20000, seed=3)
    assert rep.holds and rep.params["mode"] == "sampled" and rep.params["seed"] == 3


def test_alexandrov_family_examples():
    es = st.event_set("minkowski", [[0.1, 0.0]])
    C = causal.build_structure(es)
    assert causal.alexandrov_family(C, "chronological").shape == (0, 1)
    I = rel.transitive_closure(rel.from_pairs([(0, 1), (1, 2)], 3))
    chain = causal.CausalStructure(None, top.discrete(3), I, I, 1)
    fam = causal.alexandrov_family(chain, "chronological")
    assert {frozenset(np.flatnonzero(r)) for r in fam} == {frozenset({1})}


def test_blocked_null_pair_enters_k_under_collared_topology():
    # ball traces on a lattice are discrete inside; attach to every event of an
    # even time row the event directly above it, so closure can see past the hole
    es = st.sample_grid("minus-points:p=1/0", 8, 8)
    ts = np.unique(np.round(es.events[:, 0], 12))
    row = np.searchsorted(ts, np.round(es.events[:, 0], 12))
    n = len(es)
    gens = []
    for i in range(n):
        g = {i}
        if row[i] % 2 == 0:
            up = np.flatnonzero((row == row[i] + 1) & np.isclose(es.events[:, 1], es.events[i, 1]))
            g |= set(up.tolist())
        gens.append(g)
    T = top.build_topology(generators=gens, n=n)
    C = causal.build_structure(es, topology=T)
    J = es.relation("J")
    cone = es.relation("K")
    tc = rel.transitive_closure(C.chronology)
    found = np.argwhere(C.kplus & cone & ~J & ~tc)
    assert len(found)
    p, q = found[0]
    assert abs(es.slack()[p, q]) < 1e-9
