"""K+ on a sampled Minkowski diamond, compared with the analytic light cone.

Run: python demos/01_minkowski_sandwich.py
"""
import numpy as np

from kcausal import causal, suite
from kcausal import spacetimes as st

es = st.sample_grid("minkowski", 20, 20)
C = causal.build_structure(es)
r = C.radius
s = es.slack()

print(f"{len(es)} events, radius {r:.3f}, fixed point after {C.iterations} alternation(s)")

# every pair well inside the open cone must be in K, and K must stay near the closed cone
missing = es.relation("I") & (s > r) & ~C.kplus
stray = C.kplus & (s < -2 * r)
print("chronological pairs with slack > r missing from K:", int(missing.sum()))
print("K pairs further than 2r outside the closed cone:  ", int(stray.sum()))
# null pairs are in J but only enter K when the topology is coarse enough to see them
print("K pairs:", int(C.kplus.sum()), " analytic J pairs:", int(es.relation("J").sum()))

print()
print(f"checks on the {int(C.margin_mask().sum())} events at least {C.default_margin():.3f} from the edge:")
for name in ("k-causal", "strong-k-causal", "lemma32", "inner-continuity", "outer-continuity",
             "alexandrov-vs-manifold", "interval-vs-manifold", "joint-bicontinuity", "theorem31"):
    print(" ", suite.run_check(name, C))

# a jitter far below the lattice spacing is enough to lose antisymmetry
jittered = causal.build_structure(st.sample_grid("minkowski", 20, 20, jitter=0.02, seed=3))
print()
print("same lattice, jitter 0.02:", suite.run_check("k-causal", jittered))
off = ~np.eye(jittered.n, dtype=bool)
print("  symmetric K pairs:", int((jittered.kplus & jittered.kplus.T & off).sum() // 2))
