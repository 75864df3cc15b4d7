"""Cyclic polygons in Euclidean, hyperbolic and spherical geometry.

All three geometries are handled through the half-chord function
``s(x) = x/2, sinh(x/2), sin(x/2)``; see :mod:`cyclicpoly.core`.
"""
from cyclicpoly.core import (
    EUCLIDEAN,
    HYPERBOLIC,
    SPHERICAL,
    Geometry,
    GeometryError,
    ModelPoint,
    circle_point,
    distance,
    half_chord,
    half_chord_inverse,
    radial_scale,
    stereographic,
    stereographic_inverse,
)
from cyclicpoly.identities import (
    ChordIdentity,
    cross_geometry_verify,
    evaluate,
    fuhrmann_identity,
    gregorac_determinant,
    is_homogeneous,
    ptolemy_identity,
)
from cyclicpoly.polygon import (
    CyclicPolygon,
    InfeasibleSides,
    SolveReport,
    chord_length,
    circumradius_from_sides,
    diagonal_from_sides,
    from_angles,
    quad_circumradius,
    quad_diagonals,
    side_lengths,
    triangle_circumradius,
)

__version__ = "0.1.0"
