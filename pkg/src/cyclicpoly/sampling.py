"""Seeded random configurations.

Streams come from numpy's Philox4x32-10 counter-based bit generator keyed by
``SeedSequence(seed, spawn_key=key)``.  Each (seed, key) pair gets its own
independent stream, so trial ``k`` of a run draws the same numbers whether
trials run in order, out of order, or in parallel.
"""
from __future__ import annotations

import math

import numpy as np

from cyclicpoly.core import SPHERICAL, Geometry
from cyclicpoly.polygon import ANGLE_EPS, CyclicPolygon, from_angles

GEOMETRIES = (Geometry.EUCLIDEAN, Geometry.HYPERBOLIC, Geometry.SPHERICAL)

LOG_RADIUS_RANGE = (0.1, 10.0)


def stream(seed: int, *key: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def random_radius(rng: np.random.Generator, g: Geometry) -> float:
    """Log-uniform on [0.1, 10] in the planes; uniform on (0, pi/2] on the sphere."""
    if g is SPHERICAL:
        return (math.pi / 2) * (1.0 - rng.random())
    lo, hi = LOG_RADIUS_RANGE
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def random_angles(rng: np.random.Generator, n: int, span: float = 2 * math.pi) -> list[float]:
    """``n`` distinct sorted angles drawn uniformly from [0, span)."""
    while True:
        angles = sorted(float(a) for a in rng.uniform(0.0, span, n))
        gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + 2 * math.pi - angles[-1]]
        if min(gaps) > ANGLE_EPS:
            return angles


def random_polygon(rng: np.random.Generator, g: Geometry, n: int,
                   radius: float | None = None) -> CyclicPolygon:
    r = random_radius(rng, g) if radius is None else radius
    return from_angles(g, r, random_angles(rng, n))


def random_outside_polygon(rng: np.random.Generator, g: Geometry, n: int) -> CyclicPolygon:
    """A polygon whose vertices all sit on an arc shorter than a half circle."""
    span = rng.uniform(0.2, 0.95) * math.pi
    start = rng.uniform(0.0, 2 * math.pi)
    angles = [start + a for a in random_angles(rng, n, span)]
    return from_angles(g, random_radius(rng, g), angles)
