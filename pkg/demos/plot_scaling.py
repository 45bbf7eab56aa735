"""
Faces visited against mesh size
===============================

On evenly spread points a walk from a random start crosses on the order
of sqrt(n) triangles.  Fit the exponent on three sizes.
"""

from celestialwalk import scaling_experiment

res = scaling_experiment("delaunay-uniform", [100, 1000, 10000], 200, seed=6)
for n, mean, std in res.table:
    print(f"n={n:6d}  mean faces {mean:7.2f}  (std {std:.2f})")
print(f"fitted exponent {res.exponent:.3f}")
