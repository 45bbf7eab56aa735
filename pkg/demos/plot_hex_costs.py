"""
Predicate cost on a hexagonal mesh
==================================

Every corner of a regular hexagon is obtuse, which is the worst case for
the celestial walk: each candidate edge may also need the approximate
bisector test.  Measure how many orientation tests a walk actually spends
per half-edge it steps over, and compare with a Delaunay mesh where at
most a third of the corners are obtuse.
"""

from celestialwalk import delaunay_mesh, hex_grid, obtuse_fraction, run_batch

# the plain hex patch has a zig-zag outline; fill the pockets so the domain is convex
hexes = hex_grid(40, 40, fill_to_hull=True)
tri = delaunay_mesh(1000, seed=1)

for label, m in [("hex 40x40", hexes), ("delaunay 1000", tri)]:
    rep = run_batch(m, ["celestial", "visibility", "straight"], 500, seed=2)
    print(f"{label}: obtuse fraction {obtuse_fraction(m):.3f}")
    for name, s in rep.stats.items():
        print(f"  {name:>10}: {s.mean_orient_per_he:.3f} tests per half-edge, "
              f"{s.mean_faces:.1f} faces")
