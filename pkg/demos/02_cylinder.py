"""A timelike cylinder: closed timelike curves make K+ total and K-causality fail.

Run: python demos/02_cylinder.py
"""
from kcausal import causal, suite
from kcausal import spacetimes as st

for es in (st.sample_grid("cylinder:period=1", 6, 6), st.sample_random("cylinder:period=1", 50, 7)):
    C = causal.build_structure(es)
    print(f"{es.scheme['type']} sample, {len(es)} events")
    print("  chronology pairs:", int(C.chronology.sum()), "of", len(es) * (len(es) - 1))
    print("  K total:", bool(C.kplus.all()))
    rep = suite.run_check("k-causal", C)
    p, q = rep.witness
    print(f"  {rep}  ->  {es.events[p].round(3).tolist()} and {es.events[q].round(3).tolist()} precede each other")
