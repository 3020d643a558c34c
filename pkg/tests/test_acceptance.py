"""Acceptance criteria AC-1 .. AC-10.

Each test prints one ``AC-k PASS|FAIL`` line (also collected into the pytest
terminal summary) and asserts the criterion at its stated tolerance.
"""
import itertools
import json
import time

import numpy as np
import pydot
import pytest

from kcausal import causal, dataset, order, suite
from kcausal import relation as rel
from kcausal import spacetimes as st
from kcausal import topology as top
from kcausal.errors import NotKCausal

from conftest import CYLINDER_SAMPLES, FAMILY_SAMPLES, MINKOWSKI_SAMPLES, structure
from oracles import count_posets_brute, way_below_brute

RESULTS = {}


def record(ac, ok, detail, seconds=None):
    timing = "" if seconds is None else f" [{seconds:.2f}s]"
    line = f"{ac} {'PASS' if ok else 'FAIL'}: {detail}{timing}"
    RESULTS[ac] = line
    print(line)
    assert ok, line


# ---------------------------------------------------------------- AC-1


def _preorders3():
    """All 29 preorders on 3 points as tuples of minimal neighbourhoods (pure Python)."""
    out = []
    off = [(i, j) for i in range(3) for j in range(3) if i != j]
    for bits in itertools.product((0, 1), repeat=6):
        Q = {(i, i) for i in range(3)} | {c for c, b in zip(off, bits) if b}
        if all((a, d) in Q for (a, b) in Q for (c, d) in Q if b == c):
            out.append(tuple(frozenset(y for y in range(3) if (x, y) in Q) for x in range(3)))
    return out


def _closed_transitive_candidates(N):
    cells = [(i, j) for i in range(3) for j in range(3)]
    keep = []
    for bits in range(512):
        P = {c for k, c in enumerate(cells) if bits >> k & 1}
        if not all((a, d) in P for (a, b) in P for (c, d) in P if b == c):
            continue
        # closed: every pair outside P has a basic box N(x) x N(y) missing P
        if all((x, y) in P or not any((u, v) in P for u in N[x] for v in N[y]) for x, y in cells):
            keep.append(bits)
    return keep


def test_ac1_kplus_minimality():
    topologies = _preorders3()
    assert len(topologies) == 29
    cells = [(i, j) for i in range(3) for j in range(3)]
    irreflexive = [b for b in range(512) if not any(b >> (4 * i) & 1 for i in range(3))]
    assert len(irreflexive) == 64
    expected = {}
    for t, N in enumerate(topologies):
        cands = _closed_transitive_candidates(N)
        for b in irreflexive:
            inter = 511
            for c in cands:
                if b & ~c == 0:
                    inter &= c
            expected[t, b] = inter
    t0 = time.perf_counter()
    matches = 0
    for t, N in enumerate(topologies):
        T = top.from_min_nbhd(np.array([[y in N[x] for y in range(3)] for x in range(3)]))
        for b in irreflexive:
            I = np.array([[b >> (3 * i + j) & 1 for j in range(3)] for i in range(3)], dtype=bool)
            K, _ = causal.k_plus(I, T)
            got = sum(1 << k for k, (i, j) in enumerate(cells) if K[i, j])
            matches += got == expected[t, b]
    dt = time.perf_counter() - t0
    record("AC-1", matches == 1856 and dt < 10, f"{matches}/1856 exact matches", dt)


# ---------------------------------------------------------------- AC-2


def test_ac2_minkowski_sandwich():
    t0 = time.perf_counter()
    parts = []
    total = 0
    for name, make in MINKOWSKI_SAMPLES.items():
        es = make()
        C = causal.build_structure(es)
        r, s, K = C.radius, es.slack(), C.kplus
        low = int((es.relation("I") & (s > r) & ~K).sum())
        high = int((K & ~(s >= -2 * r)).sum())
        total += low + high
        parts.append(f"{name}: {low} missing, {high} outside relaxed cone")
    dt = time.perf_counter() - t0
    record("AC-2", total == 0 and dt < 30, "; ".join(parts), dt)


# ---------------------------------------------------------------- AC-3


def test_ac3_kplus_differs_from_j():
    t0 = time.perf_counter()
    es = st.sample_grid("minus-points:p=1/0", 20, 20)
    C = causal.build_structure(es)
    K = C.kplus
    J, Kcone = es.relation("J"), es.relation("K")
    tc = rel.transitive_closure(C.chronology)
    # a blocked null pair: in the closed flat cone but not causally connected
    blocked = Kcone & ~J
    witness = K & blocked & ~tc
    dt = time.perf_counter() - t0
    found = np.argwhere(witness)
    other = int((K & ~J & ~tc).sum())
    if len(found):
        p, q = (int(v) for v in found[0])
        detail = f"witness ({p}, {q}) {es.events[p].tolist()} -> {es.events[q].tolist()}"
    else:
        detail = (f"no blocked null pair in K ({int(blocked.sum())} blocked pairs, "
                  f"topology discrete at {int((C.topology.min_nbhd.sum(1) == 1).sum())}/{len(es)} events; "
                  f"{other} K-not-J pairs, all outside the closed cone)")
    record("AC-3", len(found) > 0 and dt < 10, detail, dt)


# ---------------------------------------------------------------- AC-4


def test_ac4_k_causality_verdicts():
    wrong = []
    for name in FAMILY_SAMPLES:
        rep = causal.is_k_causal(structure(name).kplus)
        if not rep.holds:
            wrong.append(f"{name} not K-causal, witness {rep.witness}")
    for name in CYLINDER_SAMPLES:
        rep = causal.is_k_causal(structure(name).kplus)
        if rep.holds or rep.witness is None:
            wrong.append(f"{name} reported K-causal")
    n = len(FAMILY_SAMPLES) + len(CYLINDER_SAMPLES)
    detail = f"{n - len(wrong)}/{n} samples classified correctly"
    if wrong:
        detail += "; " + "; ".join(wrong)
    record("AC-4", not wrong, detail)


# ---------------------------------------------------------------- AC-5


def _naive_instances():
    rng = np.random.default_rng(5)
    for T in top.all_preorder_topologies(3):
        for _ in range(4):
            I = rng.random((3, 3)) < 0.4
            np.fill_diagonal(I, False)
            yield T, causal.k_plus(I, T)[0]
    for _ in range(150):
        n = int(rng.integers(2, 8))
        G = rng.random((int(rng.integers(1, 5)), n)) < 0.5
        G[0] |= ~G.any(axis=0)
        T = top.build_topology(generators=G, n=n)
        I = rng.random((n, n)) < 0.3
        np.fill_diagonal(I, False)
        yield T, causal.k_plus(I, T)[0]
    for m_t, m_x in ((3, 4), (4, 3)):
        C = causal.build_structure(st.sample_grid("minkowski", m_t, m_x))
        yield C.topology, C.kplus
    C = causal.build_structure(st.sample_random("minkowski", 10, 4))
    yield C.topology, C.kplus


def test_ac5_lemma32_and_inner_continuity():
    problems = []
    for name in FAMILY_SAMPLES:
        C = structure(name)
        mask = C.margin_mask()
        try:
            if not causal.lemma32_check(C.topology, C.kplus, mask).holds:
                problems.append(f"{name}: lemma32 fails")
        except NotKCausal as exc:
            problems.append(f"{name}: lemma32 precondition fails ({exc}, witness {exc.witness})")
        for sign in ("future", "past"):
            rep = causal.inner_continuity(C.topology, C.kplus, sign, mask)
            if not rep.holds:
                problems.append(f"{name}: inner continuity ({sign}) fails at {rep.witness}")
    agree = total = 0
    for T, K in _naive_instances():
        for sign in ("future", "past"):
            for fast, naive in ((causal.inner_continuity, causal.inner_continuity_naive),
                                (causal.outer_continuity, causal.outer_continuity_naive)):
                total += 1
                agree += fast(T, K, sign).holds == naive(T, K, sign).holds
    if agree != total:
        problems.append(f"optimized vs naive disagree on {total - agree} cases")
    detail = f"optimized vs naive agree {agree}/{total}"
    if problems:
        detail += "; " + "; ".join(problems)
    record("AC-5", not problems, detail)


# ---------------------------------------------------------------- AC-6


def test_ac6_lemma43():
    t0 = time.perf_counter()
    parts, ok = [], True
    for name, es in (("minkowski-grid-12", st.sample_grid("minkowski", 12, 12)),
                     ("minkowski-random-150-s1", st.sample_random("minkowski", 150, 1)),
                     ("minus-point-grid-12", st.sample_grid("minus-points:p=1/0", 12, 12))):
        C = causal.build_structure(es)
        rep = causal.lemma43_check(C.kplus, C.topology)
        ok &= rep.holds and rep.params["mode"] == "full"
        parts.append(f"{name}: {rep.params['triples']} triples, witness {rep.witness}")
    C = causal.build_structure(st.sample_random("minkowski", 300, 2024))
    rep = causal.lemma43_check(C.kplus, C.topology, n_samples=10**6, seed=0)
    ok &= rep.holds and rep.params["mode"] == "sampled" and rep.params["triples"] == 10**6
    parts.append(f"minkowski-random-300: 10^6 sampled triples (seed 0), witness {rep.witness}")
    dt = time.perf_counter() - t0
    record("AC-6", ok and dt < 60, "; ".join(parts), dt)


# ---------------------------------------------------------------- AC-7


def test_ac7_topology_theorems():
    t0 = time.perf_counter()
    problems, passed = [], []
    for name in MINKOWSKI_SAMPLES:
        C = structure(name)
        margin = C.default_margin()
        mask = C.margin_mask(margin)
        a = suite.compare_families(C, "k-alexandrov", "balls", mask, margin)
        if not a.holds:
            problems.append(f"{name}: K-Alexandrov != balls ({a.witness})")
        try:
            b = suite.compare_families(C, "interval", "balls", mask, margin)
            if not b.holds:
                problems.append(f"{name}: interval != balls ({b.witness})")
            wb, wa = order.way_below_causal(C, order.BELOW), order.way_below_causal(C, order.ABOVE)
            c = order.continuity_checks(order.validate_order(C.order), wb, wa, mask, margin)
            if not c.details["jointly_bicontinuous"]:
                problems.append(f"{name}: not jointly bicontinuous ({c.witness})")
        except NotKCausal as exc:
            problems.append(f"{name}: interval/continuity need K-causality (witness {exc.witness})")
        if not any(p.startswith(name) for p in problems):
            passed.append(f"{name} ({int(mask.sum())} margin points)")
    dt = time.perf_counter() - t0
    detail = "passed on " + (", ".join(passed) or "none")
    if problems:
        detail += "; " + "; ".join(problems)
    record("AC-7", not problems and dt < 60, detail, dt)


# ---------------------------------------------------------------- AC-8


def test_ac8_finite_domain_theory():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    posets = [O for n in range(1, 6) for O in order.enumerate_posets(n)]
    assert [count_posets_brute(n) for n in range(1, 5)] == [1, 3, 19, 219]
    posets += [order.random_poset(int(rng.integers(1, 8)), rng) for _ in range(500)]
    bad = []
    checked_subsets = 0
    for k, O in enumerate(posets):
        P = order.validate_order(O)
        n = P.n
        for d in (order.BELOW, order.ABOVE):
            W = order.way_below_matrix_definitional(P, d)
            if not np.array_equal(W, O):
                bad.append((k, "definitional != order", d))
            if not np.array_equal(order.way_below_fast(P, d).rel, W):
                bad.append((k, "fast != definitional", d))
        if n <= 3:
            L = O.tolist()
            for x in range(n):
                for y in range(n):
                    if way_below_brute(L, x, y) != bool(O[x, y]):
                        bad.append((k, "brute oracle", (x, y)))
        if n <= 4:
            subsets = range(1 << n)
        else:
            subsets = rng.integers(0, 1 << n, size=6)
        for bits in subsets:
            U = np.array([(int(bits) >> i) & 1 for i in range(n)], dtype=bool)
            upper = not (O[U] & ~U).any()
            checked_subsets += 1
            if order.scott_open_check(P, U) != upper:
                bad.append((k, "scott", int(bits)))
        wb = order.WayBelowRel(order.way_below_matrix_definitional(P), order.DEFINITIONAL, order.BELOW)
        if not order.interpolation_check(P, wb).holds:
            bad.append((k, "interpolation"))
    dt = time.perf_counter() - t0
    record("AC-8", not bad and dt < 60,
           f"{len(posets)} posets, {checked_subsets} Scott subsets, {len(bad)} disagreements", dt)


# ---------------------------------------------------------------- AC-9


def test_ac9_interpolation_on_samples():
    problems, parts = [], []
    for name in MINKOWSKI_SAMPLES:
        C = structure(name)
        try:
            wb = order.way_below_causal(C)
        except NotKCausal as exc:
            problems.append(f"{name}: way-below needs K-causality (witness {exc.witness})")
            continue
        pairs = C.events.slack() > 2 * C.radius
        rep = order.interpolation_check(order.validate_order(C.order), wb, pairs=pairs, strict=True)
        parts.append(f"{name}: {rep.params['pairs']} pairs")
        if not rep.holds:
            problems.append(f"{name}: no interpolant for {rep.witness}")
    detail = "; ".join(parts + problems)
    record("AC-9", not problems, detail)


# ---------------------------------------------------------------- AC-10


def test_ac10_infrastructure(tmp_path):
    checks = {}
    es = st.sample_random("minkowski", 60, 10)
    C = causal.build_structure(es)
    ds = dataset.Dataset.from_event_set(es)
    ds.radius = C.radius
    ds.relations = {"I": C.chronology, "K": C.kplus}
    ds.meta = {"iterations": C.iterations}
    dataset.save(ds, tmp_path / "a.json")
    back = dataset.load(tmp_path / "a.json")
    dataset.save(back, tmp_path / "b.json")
    checks["dataset round-trip"] = (back == ds and
                                    (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes())
    rng = np.random.default_rng(0)
    checks["relation encoding"] = all(
        np.array_equal(dataset.decode_relation(dataset.encode_relation(R)), R)
        for R in (rng.random((n, n)) < 0.5 for n in (0, 1, 7, 8, 9, 63, 64, 65)))
    g5 = causal.build_structure(st.sample_grid("minkowski", 5, 5))
    dots = [dataset.to_dot(g5.kplus, "K"), dataset.to_dot(dataset.hasse(g5.order), "hasse")]
    checks["DOT parses"] = all(pydot.graph_from_dot_data(t) for t in dots)

    def report_bytes():
        Cs = causal.build_structure(st.sample_random("minkowski", 80, 77))
        reps = [suite.run_check(n, Cs).to_dict(with_timing=False) for n in ("k-causal", "lemma43", "k-convexity")]
        return json.dumps(reps, sort_keys=True)

    checks["reproducible reports"] = report_bytes() == report_bytes()
    failed = [k for k, v in checks.items() if not v]
    record("AC-10", not failed, ", ".join(f"{k}: {'ok' if v else 'FAILED'}" for k, v in checks.items()))
