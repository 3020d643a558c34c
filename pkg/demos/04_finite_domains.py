"""Way-below on finite posets and on the upper space of a finite discrete space.

Run: python demos/04_finite_domains.py
"""
import numpy as np

from kcausal import order

counts = [len(order.enumerate_posets(n)) for n in range(6)]
print("labelled posets on 0..5 points:", counts)

agree = 0
posets = order.enumerate_posets(4)
for O in posets:
    P = order.PosetHandle(O)
    agree += np.array_equal(order.way_below_matrix_definitional(P), O)
print(f"way-below equals the order on {agree}/{len(posets)} posets with 4 points")

for k in (1, 2, 3):
    print(order.upper_space_demo(k), f"({2 ** k - 1} nonempty subsets)")
