"""
Four ways to walk a triangulation
=================================

Build a Delaunay triangulation, drop a query point and compare how many
faces and orientation tests each walking strategy spends reaching it.
The last walk is drawn to ``walk.svg``.
"""

from celestialwalk import delaunay_mesh, precompute_obtuse_bits
from celestialwalk.svg import render_svg
from celestialwalk.walks import run_walk

m = delaunay_mesh(400, seed=3)
bits = precompute_obtuse_bits(m)
query = (0.83, 0.12)
start = 0
print(f"{m.n_vertices} vertices, {m.outer_face} triangles, start in face {m.face[start]}")

for name in ("celestial", "abstract", "visibility", "straight"):
    res, trace = run_walk(m, name, start, query, memo=bits if name == "celestial" else None)
    c = trace.counters
    print(f"{name:>10}: {res}  faces={len(trace.visited_faces):3d}  "
          f"orientation tests={c.orientation_tests}")

###############################################################################
# The celestial trace, with obtuse corners marked.

res, trace = run_walk(m, "celestial", start, query)
with open("walk.svg", "w") as fh:
    fh.write(render_svg(m, trace, query))
