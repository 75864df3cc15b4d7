"""Half-chord algebra and model geometry for the three constant-curvature planes.

Models used throughout:

* Euclidean: the plane, points ``(x, y)``.
* Hyperbolic: the Poincare disk (curvature -1), points ``(x, y)`` with
  ``x**2 + y**2 < 1``.
* Spherical: the unit sphere, points ``(x, y, z)``.

Circles are always centred at the canonical centre: the origin for the two
planar models, the south pole ``(0, 0, -1)`` on the sphere.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

SPHERE_TOL = 1e-12


class GeometryError(ValueError):
    """Raised when an input falls outside the domain of an operation."""


class Geometry(enum.Enum):
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"
    SPHERICAL = "spherical"

    @classmethod
    def parse(cls, name: "str | Geometry") -> "Geometry":
        if isinstance(name, Geometry):
            return name
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise GeometryError(f"unknown geometry {name!r}") from None


EUCLIDEAN = Geometry.EUCLIDEAN
HYPERBOLIC = Geometry.HYPERBOLIC
SPHERICAL = Geometry.SPHERICAL


@dataclass(frozen=True)
class ModelPoint:
    geometry: Geometry
    coords: tuple[float, ...]

    def __post_init__(self):
        g, c = self.geometry, self.coords
        want = 3 if g is SPHERICAL else 2
        if len(c) != want:
            raise GeometryError(f"{g.value} point needs {want} coordinates, got {len(c)}")
        if not all(math.isfinite(v) for v in c):
            raise GeometryError("point coordinates must be finite")
        if g is HYPERBOLIC and math.hypot(*c) >= 1.0:
            raise GeometryError("hyperbolic point must lie in the open unit disk")
        if g is SPHERICAL and abs(c[0] ** 2 + c[1] ** 2 + c[2] ** 2 - 1.0) > SPHERE_TOL:
            raise GeometryError("spherical point must lie on the unit sphere")

    def __iter__(self):
        return iter(self.coords)


def center(g: Geometry) -> ModelPoint:
    """Canonical circle centre for ``g``."""
    if g is SPHERICAL:
        return ModelPoint(g, (0.0, 0.0, -1.0))
    return ModelPoint(g, (0.0, 0.0))


def half_chord(x: float, g: Geometry) -> float:
    """The unifying function s(x): x/2, sinh(x/2) or sin(x/2)."""
    if x < 0:
        raise GeometryError(f"length must be nonnegative, got {x}")
    if g is EUCLIDEAN:
        return x / 2
    if g is HYPERBOLIC:
        return math.sinh(x / 2)
    if x > math.pi:
        raise GeometryError(f"spherical length must be at most pi, got {x}")
    return math.sin(x / 2)


def half_chord_inverse(u: float, g: Geometry) -> float:
    """Inverse of :func:`half_chord`; spherical values use the principal branch."""
    if u < 0:
        raise GeometryError(f"half-chord must be nonnegative, got {u}")
    if g is EUCLIDEAN:
        return 2 * u
    if g is HYPERBOLIC:
        return 2 * math.asinh(u)
    if u > 1:
        raise GeometryError(f"spherical half-chord must be at most 1, got {u}")
    return 2 * math.asin(u)


def radius_to_rho(r: float, g: Geometry) -> float:
    """s(2r): r, sinh(r) or sin(r)."""
    return half_chord(2 * r, g)


def rho_to_radius(rho: float, g: Geometry) -> float:
    """Inverse of :func:`radius_to_rho`."""
    return half_chord_inverse(rho, g) / 2


def _check_pair(p: ModelPoint, q: ModelPoint):
    if p.geometry is not q.geometry:
        raise GeometryError(f"geometry mismatch: {p.geometry.value} vs {q.geometry.value}")


def _conformal(x: float, y: float) -> float:
    # 1 - x^2 - y^2 in exact arithmetic; near the rim the float version loses
    # a relative 1e-16/(1-|p|), which dominates distances at large radii.
    return float(1 - Fraction(x) ** 2 - Fraction(y) ** 2)


def _snap_conformal(x: float, y: float, w: float) -> tuple[float, float]:
    """Nudge ``(x, y)`` by at most two ulps so that 1 - x^2 - y^2 is closest to ``w``.

    Independent rounding of the coordinates perturbs 1 - |p|^2 by about 1e-16,
    a large relative error near the rim.  The nudge changes the angle by
    about 1e-16 and keeps the hyperbolic radius accurate.
    """
    def candidates(c):
        steps = (0, -1, 1, -2, 2) if c else (0,)
        return [(v, Fraction(v) ** 2) for v in (c + k * math.ulp(c) for k in steps)]

    xs, ys = candidates(x), candidates(y)
    rest = 1 - Fraction(w)
    _, cx, cy = min((abs(rest - sx - sy), cx, cy) for cx, sx in xs for cy, sy in ys)
    return cx, cy


def distance(p: ModelPoint, q: ModelPoint) -> float:
    """Intrinsic distance between two points of the same model."""
    _check_pair(p, q)
    g = p.geometry
    if g is EUCLIDEAN:
        return math.hypot(q.coords[0] - p.coords[0], q.coords[1] - p.coords[1])
    if g is HYPERBOLIC:
        # 2*artanh(|p-q| / |1 - conj(p) q|), rewritten as
        # 2*asinh(|p-q| / sqrt((1-|p|^2)(1-|q|^2))) which stays accurate near the boundary.
        (px, py), (qx, qy) = p.coords, q.coords
        gap = math.hypot(qx - px, qy - py)
        return 2 * math.asinh(gap / math.sqrt(_conformal(px, py) * _conformal(qx, qy)))
    (ax, ay, az), (bx, by, bz) = p.coords, q.coords
    cross = math.hypot(ay * bz - az * by, az * bx - ax * bz, ax * by - ay * bx)
    return math.atan2(cross, ax * bx + ay * by + az * bz)


def _normalize_angle(theta: float) -> float:
    t = math.fmod(theta, 2 * math.pi)
    if t < 0:
        t += 2 * math.pi
    return 0.0 if t >= 2 * math.pi else t


def circle_point(r: float, theta: float, g: Geometry) -> ModelPoint:
    """Point at central angle ``theta`` on the circle of intrinsic radius ``r``."""
    if not r > 0:
        raise GeometryError(f"circle radius must be positive, got {r}")
    c, s = math.cos(theta), math.sin(theta)
    if g is EUCLIDEAN:
        return ModelPoint(g, (r * c, r * s))
    if g is HYPERBOLIC:
        m = math.tanh(r / 2)
        return ModelPoint(g, _snap_conformal(m * c, m * s, 1 / math.cosh(r / 2) ** 2))
    if r > math.pi / 2:
        raise GeometryError(f"spherical circle radius must be at most pi/2, got {r}")
    sr = math.sin(r)
    return ModelPoint(g, (sr * c, sr * s, -math.cos(r)))


def polar(p: ModelPoint) -> tuple[float, float]:
    """Intrinsic radius and central angle of ``p`` about the canonical centre."""
    theta = _normalize_angle(math.atan2(p.coords[1], p.coords[0]))
    return distance(center(p.geometry), p), theta


def central_angle(p: ModelPoint, q: ModelPoint) -> float:
    """Angle in [0, pi] subtended at the canonical centre by ``p`` and ``q``."""
    _check_pair(p, q)
    (px, py), (qx, qy) = p.coords[:2], q.coords[:2]
    return abs(math.atan2(px * qy - py * qx, px * qx + py * qy))


def radial_scale(p: ModelPoint, x: float) -> ModelPoint:
    """Move ``p`` along its ray from the centre so that s(2r) is multiplied by ``x``."""
    if not x > 0:
        raise GeometryError(f"scale factor must be positive, got {x}")
    g = p.geometry
    if g is EUCLIDEAN:
        return ModelPoint(g, (x * p.coords[0], x * p.coords[1]))
    px, py = p.coords[0], p.coords[1]
    if g is HYPERBOLIC:
        m = math.hypot(px, py)
        if m == 0:
            return p
        # sinh(r) = 2m / (1 - m^2); new model radius tanh(r'/2) = S / (1 + sqrt(1 + S^2)).
        big = x * 2 * m / _conformal(px, py)
        root = 1 + math.sqrt(1 + big * big)
        m2 = big / root
        return ModelPoint(g, _snap_conformal(px * m2 / m, py * m2 / m, 2 / root))
    if p.coords[2] > 0:
        raise GeometryError("spherical radial scaling needs a point within pi/2 of the south pole")
    if x * math.hypot(px, py) > 1 + 1e-15:
        raise GeometryError(f"spherical scaling by {x} exceeds the equator")
    # cos^2 r' = cos^2 r + (1 - x^2) sin^2 r, which avoids 1 - sin^2 r' near the equator.
    pz = p.coords[2]
    cos2 = pz * pz + (1 - x) * (1 + x) * (px * px + py * py)
    return ModelPoint(g, (x * px, x * py, -math.sqrt(max(cos2, 0.0))))


def stereographic(p: ModelPoint) -> ModelPoint:
    """Project a sphere point from the north pole onto the plane z = 0."""
    if p.geometry is not SPHERICAL:
        raise GeometryError("stereographic projection takes a spherical point")
    x, y, z = p.coords
    if z >= 1.0:
        raise GeometryError("cannot project the north pole")
    return ModelPoint(EUCLIDEAN, (x / (1 - z), y / (1 - z)))


def stereographic_inverse(q: ModelPoint) -> ModelPoint:
    """Lift a plane point back to the unit sphere; inverse of :func:`stereographic`."""
    if q.geometry is not EUCLIDEAN:
        raise GeometryError("inverse stereographic projection takes a Euclidean point")
    x, y = q.coords
    n2 = x * x + y * y
    d = 1 + n2
    return ModelPoint(SPHERICAL, (2 * x / d, 2 * y / d, (n2 - 1) / d))
