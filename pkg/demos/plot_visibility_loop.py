"""
A visibility walk that never arrives
====================================

Away from Delaunay triangulations the visibility walk can circle forever.
Search random flipped triangulations for such a query, then run the
celestial walk on the same input.
"""

from celestialwalk import celestial_walk, find_visibility_loop_instance, visibility_walk
from celestialwalk.svg import render_svg

inst = find_visibility_loop_instance(seed=0)
m, start, q = inst.mesh, inst.start, inst.query
print(f"found: {m.outer_face} triangles, start {start}, query {q}")

res, trace = visibility_walk(m, start, q)
print("visibility:", res, "after", len(trace.steps), "steps")

res, trace = celestial_walk(m, start, q)
print("celestial: ", res, "visiting", len(trace.visited_faces), "faces")

with open("loop.svg", "w") as fh:
    fh.write(render_svg(m, trace, q))
