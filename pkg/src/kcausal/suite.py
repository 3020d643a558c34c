"""Named check suites run against a causal structure, restricted to margin-interior events."""
from __future__ import annotations

import time

import numpy as np

from . import causal, order
from . import relation as rel
from . import topology as top
from .report import CheckReport


def _poset(C):
    return order.validate_order(C.order)


def _finish(report, name, margin, t0):
    report.name = name
    report.params["margin"] = float(margin)
    report.timing = {"seconds": time.perf_counter() - t0}
    return report


def _combine(name, reports, margin, t0, notes=()):
    holds = all(r.holds for r in reports)
    witness = next((r.witness for r in reports if not r.holds), None)
    details = {r.name: r.holds for r in reports}
    params = {"margin": float(margin)}
    for r in reports:
        for k, v in r.params.items():
            params.setdefault(k, v)
    merged = list(notes)
    for r in reports:
        merged.extend(n for n in r.notes if n not in merged)
    return CheckReport(name, holds, witness, params, merged, details,
                       timing={"seconds": time.perf_counter() - t0})


def _not_k_causal(name, C, margin, t0):
    rep = causal.is_k_causal(C.kplus)
    return CheckReport(name, False, rep.witness, {"margin": float(margin)},
                       ["K+ is not antisymmetric; the order-theoretic check does not apply"],
                       timing={"seconds": time.perf_counter() - t0})


def check_k_causal(C, mask, margin):
    t0 = time.perf_counter()
    return _finish(causal.is_k_causal(C.kplus), "k-causal", margin, t0)


def check_strong_k_causal(C, mask, margin):
    t0 = time.perf_counter()
    return _finish(causal.strong_k_causality(C.topology, C.kplus, mask), "strong-k-causal", margin, t0)


def check_k_convexity(C, mask, margin):
    """Minimal neighbourhoods of margin-interior events are K-convex."""
    t0 = time.perf_counter()
    bad = [int(p) for p in np.flatnonzero(mask)
           if not causal.k_convexity(C.topology, C.kplus, C.topology.min_nbhd[p])]
    return CheckReport("k-convexity", not bad, bad[0] if bad else None,
                       {"margin": float(margin), "restricted_points": int(mask.sum()), "failures": len(bad)},
                       timing={"seconds": time.perf_counter() - t0})


def check_inner_continuity(C, mask, margin):
    t0 = time.perf_counter()
    reps = [causal.inner_continuity(C.topology, C.kplus, s, mask) for s in ("future", "past")]
    return _combine("inner-continuity", reps, margin, t0)


def check_outer_continuity(C, mask, margin):
    t0 = time.perf_counter()
    reps = [causal.outer_continuity(C.topology, C.kplus, s, mask) for s in ("future", "past")]
    return _combine("outer-continuity", reps, margin, t0)


def check_lemma32(C, mask, margin):
    t0 = time.perf_counter()
    if not rel.is_antisymmetric(C.kplus):
        return _not_k_causal("lemma32", C, margin, t0)
    return _finish(causal.lemma32_check(C.topology, C.kplus, mask), "lemma32", margin, t0)


def check_lemma43(C, mask, margin):
    t0 = time.perf_counter()
    return _finish(causal.lemma43_check(C.kplus, C.topology, mask), "lemma43", margin, t0)


def _causal_way_below(C):
    wb = order.way_below_causal(C, order.BELOW)
    wa = order.way_below_causal(C, order.ABOVE)
    return wb, wa


def check_interpolation(C, mask, margin):
    t0 = time.perf_counter()
    if not rel.is_antisymmetric(C.kplus):
        return _not_k_causal("interpolation", C, margin, t0)
    wb, _ = _causal_way_below(C)
    rep = order.interpolation_check(_poset(C), wb, pairs=mask[:, None] & mask[None, :])
    strict = order.interpolation_check(_poset(C), wb, pairs=mask[:, None] & mask[None, :]
                                       & ~np.eye(C.n, dtype=bool), strict=True)
    rep.details["strict_interpolants_for_all_distinct_pairs"] = strict.holds
    return _finish(rep, "interpolation", margin, t0)


def _continuity(C, mask, margin):
    wb, wa = _causal_way_below(C)
    return order.continuity_checks(_poset(C), wb, wa, mask, margin)


def check_continuity(C, mask, margin):
    t0 = time.perf_counter()
    if not rel.is_antisymmetric(C.kplus):
        return _not_k_causal("continuity", C, margin, t0)
    rep = _continuity(C, mask, margin)
    rep.holds = rep.details["bicontinuous"]
    return _finish(rep, "continuity", margin, t0)


def check_joint_bicontinuity(C, mask, margin):
    t0 = time.perf_counter()
    if not rel.is_antisymmetric(C.kplus):
        return _not_k_causal("joint-bicontinuity", C, margin, t0)
    rep = _continuity(C, mask, margin)
    return _finish(rep, "joint-bicontinuity", margin, t0)


def check_gh_poset(C, mask, margin):
    t0 = time.perf_counter()
    if not rel.is_antisymmetric(C.kplus):
        return _not_k_causal("gh-poset", C, margin, t0)
    wb, wa = _causal_way_below(C)
    return _finish(order.gh_poset_check(_poset(C), wb, wa, mask, margin), "gh-poset", margin, t0)


def family(C, name):
    """Generating family by CLI name: balls, alexandrov, k-alexandrov or interval."""
    if name == "balls":
        return C.topology.generators
    if name == "alexandrov":
        return causal.alexandrov_family(C, "chronological")
    if name == "k-alexandrov":
        return causal.alexandrov_family(C, "k_interior")
    if name == "interval":
        wb, wa = _causal_way_below(C)
        return order.interval_topology_family(wb, wa)
    raise KeyError(name)


FAMILIES = ("balls", "alexandrov", "k-alexandrov", "interval")


def compare_families(C, left, right, mask, margin):
    t0 = time.perf_counter()
    rep = top.topologies_equivalent(family(C, left), family(C, right), mask, n=C.n, labels=(left, right))
    return _finish(rep, f"compare:{left}-vs-{right}", margin, t0)


def check_interval_vs_manifold(C, mask, margin):
    t0 = time.perf_counter()
    if not rel.is_antisymmetric(C.kplus):
        return _not_k_causal("interval-vs-manifold", C, margin, t0)
    rep = compare_families(C, "interval", "balls", mask, margin)
    rep.notes.append(order.CAUSAL_INTERIOR_CAVEAT)
    return _finish(rep, "interval-vs-manifold", margin, t0)


def check_alexandrov_vs_manifold(C, mask, margin):
    t0 = time.perf_counter()
    reps = [compare_families(C, fam, "balls", mask, margin) for fam in ("alexandrov", "k-alexandrov")]
    return _combine("alexandrov-vs-manifold", reps, margin, t0)


def check_theorem46(C, mask, margin):
    """The interior way-below and way-above matrices coincide and the interiors are symmetric."""
    t0 = time.perf_counter()
    if not rel.is_antisymmetric(C.kplus):
        return _not_k_causal("theorem46", C, margin, t0)
    wb, wa = _causal_way_below(C)
    same = CheckReport("way-below-equals-way-above", bool(np.array_equal(wb.rel, wa.rel)))
    l32 = causal.lemma32_check(C.topology, C.kplus, mask)
    return _combine("theorem46", [same, l32], margin, t0, notes=[order.CAUSAL_INTERIOR_CAVEAT])


def check_theorem31(C, mask, margin):
    """Bicontinuity, way-below = chronology and interval topology = ball topology, from I+ alone."""
    t0 = time.perf_counter()
    model = getattr(C.events, "model", None)
    if model is None or not model.globally_hyperbolic:
        return CheckReport("theorem31", False, "model is not globally hyperbolic", {"margin": float(margin)},
                           timing={"seconds": time.perf_counter() - t0})
    I = C.chronology
    P = order.validate_order(rel.transitive_closure(I), reflexivize=True)
    W = top.interior_rows(C.topology, P.order)
    wb = order.WayBelowRel(W, order.CAUSAL_INTERIOR, order.BELOW)
    wa = order.WayBelowRel(W, order.CAUSAL_INTERIOR, order.ABOVE)
    cont = order.continuity_checks(P, wb, wa, mask, margin)
    cont.holds = cont.details["bicontinuous"]
    cont.name = "bicontinuous"
    pairs = mask[:, None] & mask[None, :] & ~np.eye(C.n, dtype=bool)
    diff = (W != I) & pairs
    chron = CheckReport("way-below-equals-chronology", not diff.any(),
                        tuple(int(v) for v in np.argwhere(diff)[0]) if diff.any() else None)
    fam = order.interval_topology_family(wb, wa)
    topo = top.topologies_equivalent(fam, C.topology.generators, mask, n=C.n, labels=("interval", "balls"))
    topo.name = "interval-topology-equals-manifold"
    return _combine("theorem31", [cont, chron, topo], margin, t0)


CHECKS = {
    "k-causal": check_k_causal,
    "strong-k-causal": check_strong_k_causal,
    "k-convexity": check_k_convexity,
    "inner-continuity": check_inner_continuity,
    "outer-continuity": check_outer_continuity,
    "lemma32": check_lemma32,
    "lemma43": check_lemma43,
    "interpolation": check_interpolation,
    "continuity": check_continuity,
    "joint-bicontinuity": check_joint_bicontinuity,
    "interval-vs-manifold": check_interval_vs_manifold,
    "alexandrov-vs-manifold": check_alexandrov_vs_manifold,
    "gh-poset": check_gh_poset,
    "theorem46": check_theorem46,
    "theorem31": check_theorem31,
}


def run_check(name, C, margin=None):
    """Run one named check; ``margin`` defaults to twice the topology radius."""
    if name not in CHECKS:
        raise KeyError(f"unknown check {name!r}")
    if margin is None:
        margin = C.default_margin()
    mask = C.margin_mask(margin)
    return CHECKS[name](C, mask, margin)
