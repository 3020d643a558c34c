"""Minkowski plane minus a point: where K+ and J+ can differ.

The null segment through the hole is cut, so J+ misses that pair while the closed
light cone contains it. K+ picks the pair up only if the topology is coarse enough
to see across the hole. Ball traces on a lattice are discrete inside the sample,
so the default topology never does; a hand-made collared topology does.

Run: python demos/03_punctured_plane.py
"""
import numpy as np

from kcausal import causal
from kcausal import relation as rel
from kcausal import spacetimes as st
from kcausal import topology as top

es = st.sample_grid("minus-points:p=1/0", 8, 8)
J, cone = es.relation("J"), es.relation("K")
blocked = cone & ~J
print(f"{len(es)} events; {int(blocked.sum())} null pairs blocked by the hole")

C = causal.build_structure(es)
tc = rel.transitive_closure(C.chronology)
print("ball topology discrete at", int((C.topology.min_nbhd.sum(1) == 1).sum()), "of", len(es), "events")
print("blocked pairs in K (ball topology):", int((C.kplus & blocked & ~tc).sum()))

# collar: every event of an even time row is inseparable from the event just above it
ts = np.unique(np.round(es.events[:, 0], 12))
row = np.searchsorted(ts, np.round(es.events[:, 0], 12))
gens = []
for i in range(len(es)):
    g = {i}
    if row[i] % 2 == 0:
        g |= set(np.flatnonzero((row == row[i] + 1) & np.isclose(es.events[:, 1], es.events[i, 1])).tolist())
    gens.append(g)
Cc = causal.build_structure(es, topology=top.build_topology(generators=gens, n=len(es)))
hits = np.argwhere(Cc.kplus & blocked & ~tc)
print("blocked pairs in K (collared topology):", len(hits))
p, q = hits[0]
print(f"  e.g. {es.events[p].round(3).tolist()} -> {es.events[q].round(3).tolist()}:"
      f" in K, not in J, not reachable by chronology alone")
