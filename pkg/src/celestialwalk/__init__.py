"""Walking point location in convex planar subdivisions.

The celestial walk locates a query point using orientation predicates
only and terminates on every convex subdivision.  The abstract walk,
visibility walk and straight walk are provided for comparison.
"""

from .geometry import (
    CelestialDistance,
    DegenerateEdgeError,
    GeometryError,
    InvalidInputError,
    InvalidPolygonError,
    Metric,
    Orientation,
    cd_less,
    celestial_distance,
    closest_edge_of_face,
    closest_point_on_segment,
    incircle_sign,
    left_of_approx_bisector,
    obtuse,
    orient,
    strictly_right,
)
from .mesh import (
    Mesh,
    MeshError,
    Move,
    build_mesh,
    dumps_mesh,
    face_perimeter,
    loads_mesh,
    navigate,
    point_in_face,
    precompute_obtuse_bits,
    read_mesh,
    validate_mesh,
    write_mesh,
)
from .generators import (
    LoopInstance,
    chord_split_subdivision,
    delaunay_mesh,
    delaunay_triangulate,
    find_visibility_loop_instance,
    flipped_mesh,
    hex_grid,
    random_flip_perturb,
)
from .walks import (
    AbortReason,
    Action,
    FirstCandidate,
    GreedyMinDistance,
    SeededRandom,
    Status,
    Visibility,
    WalkResult,
    WalkTrace,
    abstract_walk,
    celestial_walk,
    straight_walk,
    visibility_walk,
)
from .bench import obtuse_fraction, run_batch, scaling_experiment

__version__ = "0.1.0"

__all__ = [
    "CelestialDistance",
    "DegenerateEdgeError",
    "GeometryError",
    "InvalidInputError",
    "InvalidPolygonError",
    "Metric",
    "Orientation",
    "cd_less",
    "celestial_distance",
    "closest_edge_of_face",
    "closest_point_on_segment",
    "incircle_sign",
    "left_of_approx_bisector",
    "obtuse",
    "orient",
    "strictly_right",
    "Mesh",
    "MeshError",
    "Move",
    "build_mesh",
    "dumps_mesh",
    "face_perimeter",
    "loads_mesh",
    "navigate",
    "point_in_face",
    "precompute_obtuse_bits",
    "read_mesh",
    "validate_mesh",
    "write_mesh",
    "LoopInstance",
    "chord_split_subdivision",
    "delaunay_mesh",
    "delaunay_triangulate",
    "find_visibility_loop_instance",
    "flipped_mesh",
    "hex_grid",
    "random_flip_perturb",
    "AbortReason",
    "Action",
    "FirstCandidate",
    "GreedyMinDistance",
    "SeededRandom",
    "Status",
    "Visibility",
    "WalkResult",
    "WalkTrace",
    "abstract_walk",
    "celestial_walk",
    "straight_walk",
    "visibility_walk",
    "obtuse_fraction",
    "run_batch",
    "scaling_experiment",
]
