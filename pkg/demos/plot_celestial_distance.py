"""
Celestial distance and the corner cone
======================================

Two edges of a unit square meet at the origin.  A point south-west of the
corner is equally far from both edges, so plain Euclidean distance cannot
pick one.  The celestial distance breaks the tie with the angle between
the edge line and the segment to the closest point.
"""

import math

from celestialwalk import Metric, celestial_distance, closest_edge_of_face, obtuse

square = [((0, 0), (1, 0)), ((1, 0), (1, 1)), ((1, 1), (0, 1)), ((0, 1), (0, 0))]
p = (-1.0, -0.5)

# both edges share the closest point (0, 0), so the squared distances agree
bottom = celestial_distance((0, 0), (1, 0), p)
left = celestial_distance((0, 1), (0, 0), p)
print("bottom: d2=%s alpha=%.1f deg" % (bottom.d2, math.degrees(bottom.alpha)))
print("left:   d2=%s alpha=%.1f deg" % (left.d2, math.degrees(left.alpha)))

# the smaller wide angle wins
print("euclidean argmin:", closest_edge_of_face(square, p, Metric.EUCLIDEAN))
print("celestial argmin:", closest_edge_of_face(square, p, Metric.CELESTIAL))

###############################################################################
# The walk never computes these angles.  It only asks whether a corner is
# obtuse, which reduces to the sign of a dot product.

print(obtuse((0, 0), (2, 0), (3, 1)), obtuse((0, 0), (2, 0), (2, 2)))
