"""Cyclic polygons: construction, chord lengths, and radius/diagonal solving.

Every length ``l`` enters the formulas here through its half-chord ``s(l)``.
A chord with central angle ``phi`` on a circle of radius ``r`` obeys

    s(l) = s(2r) * sin(phi / 2)

in all three geometries, so the central-angle equation that pins down the
radius is the same once written in half-chord space.  The solver works on
``rho = s(2r)`` and only consults the geometry when mapping back to ``r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from cyclicpoly.core import (
    SPHERICAL,
    Geometry,
    GeometryError,
    ModelPoint,
    _normalize_angle,
    circle_point,
    half_chord,
    half_chord_inverse,
    radius_to_rho,
    rho_to_radius,
)

DEFAULT_TOL = 1e-13
ANGLE_EPS = 1e-14  # vertex angles closer than this count as the same vertex
MAX_ITER = 200
_TWO_PI = 2 * math.pi


class InfeasibleSides(GeometryError):
    """No convex cyclic polygon has the requested side lengths."""


class SphericalInfeasible(InfeasibleSides):
    """The sides would need a circle larger than a great circle."""


class SolverError(RuntimeError):
    """Bisection did not reach the requested tolerance."""


def _check_radius(r: float, g: Geometry):
    if not (r > 0 and math.isfinite(r)):
        raise GeometryError(f"radius must be positive and finite, got {r}")
    if g is SPHERICAL and r > math.pi / 2:
        raise GeometryError(f"spherical radius must be at most pi/2, got {r}")


@dataclass(frozen=True)
class CyclicPolygon:
    geometry: Geometry
    radius: float
    angles: tuple[float, ...]

    def __post_init__(self):
        _check_radius(self.radius, self.geometry)
        if len(self.angles) < 3:
            raise GeometryError(f"a polygon needs at least 3 vertices, got {len(self.angles)}")
        for a, b in zip(self.angles, self.angles[1:]):
            if not a < b:
                raise GeometryError("angles must be strictly increasing")
        if self.angles[0] < 0 or self.angles[-1] >= _TWO_PI:
            raise GeometryError("angles must lie in [0, 2*pi)")

    @property
    def n(self) -> int:
        return len(self.angles)

    @property
    def rho(self) -> float:
        """s(2r) for this polygon's circumradius."""
        return radius_to_rho(self.radius, self.geometry)

    def vertices(self) -> list[ModelPoint]:
        return [circle_point(self.radius, t, self.geometry) for t in self.angles]

    def arcs(self) -> list[float]:
        """Central angles of the sides, in cyclic order."""
        a = self.angles
        return [a[i + 1] - a[i] for i in range(len(a) - 1)] + [a[0] + _TWO_PI - a[-1]]

    @property
    def center_inside(self) -> bool:
        """True when the circumcentre is inside the polygon or on its boundary."""
        return max(self.arcs()) <= math.pi


def from_angles(g, r: float, angles) -> CyclicPolygon:
    g = Geometry.parse(g)
    _check_radius(r, g)
    norm = sorted(_normalize_angle(float(t)) for t in angles)
    if len(norm) < 3:
        raise GeometryError(f"a polygon needs at least 3 vertices, got {len(norm)}")
    gaps = [b - a for a, b in zip(norm, norm[1:])] + [norm[0] + _TWO_PI - norm[-1]]
    if min(gaps) <= ANGLE_EPS:
        raise GeometryError("duplicate vertex angles")
    return CyclicPolygon(g, float(r), tuple(norm))


def _check_index(P: CyclicPolygon, i: int, j: int):
    if not (0 <= i < P.n and 0 <= j < P.n):
        raise IndexError(f"vertex index out of range for {P.n}-gon: ({i}, {j})")
    if i == j:
        raise IndexError("chord needs two distinct vertices")


def chord_half(P: CyclicPolygon, i: int, j: int) -> float:
    """Half-chord s(l_ij) via the chord law."""
    _check_index(P, i, j)
    return P.rho * abs(math.sin((P.angles[i] - P.angles[j]) / 2))


def chord_length(P: CyclicPolygon, i: int, j: int) -> float:
    u = chord_half(P, i, j)
    if P.geometry is not SPHERICAL:
        return half_chord_inverse(u, P.geometry)
    # 2*asin(u) loses half its digits as u -> 1; use cos(l/2) built from cos(r) instead.
    half = (P.angles[i] - P.angles[j]) / 2
    cos_half = math.hypot(math.cos(half), math.cos(P.radius) * math.sin(half))
    return 2 * math.atan2(u, cos_half)


def side_lengths(P: CyclicPolygon) -> list[float]:
    return [chord_length(P, i, (i + 1) % P.n) for i in range(P.n)]


def scaled(P: CyclicPolygon, x: float) -> CyclicPolygon:
    """Same central angles on the concentric circle with s(2r) multiplied by ``x``."""
    rho = x * P.rho
    if P.geometry is SPHERICAL and rho > 1:
        raise GeometryError(f"spherical scaling by {x} exceeds a great circle")
    return CyclicPolygon(P.geometry, rho_to_radius(rho, P.geometry), P.angles)


# -- solving in half-chord space ------------------------------------------------


@dataclass(frozen=True)
class SolveReport:
    radius: float
    rho: float
    center_inside: bool
    iterations: int
    residual: float
    feasible: bool = True


def _asin_ratio(u: float, rho: float) -> float:
    return math.asin(min(u / rho, 1.0))


def _inside_objective(u, rho):
    return sum(2 * _asin_ratio(v, rho) for v in u) - _TWO_PI


def _outside_objective(u, m, rho):
    rest = sum(_asin_ratio(v, rho) for k, v in enumerate(u) if k != m)
    return rest - _asin_ratio(u[m], rho)


def _bisect(fn, lo, hi, tol, decreasing, map_back=None):
    """Root of ``fn`` on [lo, hi]; returns (root, iterations).

    With ``map_back`` the bracket must also be narrow after mapping, which
    matters where the map is steep (arcsin near 1).
    """
    for it in range(1, MAX_ITER + 1):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            return mid, it
        val = fn(mid)
        if (val > 0) == decreasing:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * hi:
            if map_back is None:
                return 0.5 * (lo + hi), it
            a, b = map_back(lo), map_back(hi)
            if b - a < tol * b:
                return 0.5 * (lo + hi), it
    raise SolverError(f"bisection did not converge in {MAX_ITER} iterations")


def solve_rho(u, tol: float = DEFAULT_TOL, map_back=None) -> tuple[float, bool, int, float]:
    """Solve for s(2r) given the half-chords ``u`` of the sides.

    Geometry-independent.  Returns ``(rho, center_inside, iterations, residual)``
    where the residual is the central-angle equation evaluated at the root.
    ``map_back`` optionally adds a second stopping test; see :func:`_bisect`.
    """
    u = [float(v) for v in u]
    if len(u) < 3:
        raise GeometryError(f"a polygon needs at least 3 sides, got {len(u)}")
    if not all(v > 0 and math.isfinite(v) for v in u):
        raise InfeasibleSides("side lengths must be positive and finite")
    m = max(range(len(u)), key=u.__getitem__)
    um = u[m]
    if um >= sum(u) - um:
        raise InfeasibleSides("longest side's half-chord is not shorter than the sum of the others")

    at_min = _inside_objective(u, um)
    if at_min == 0:
        return um, True, 0, 0.0
    if at_min > 0:
        # Branch A: centre inside; objective falls strictly from at_min to -2pi.
        hi = 10 * sum(u)
        while _inside_objective(u, hi) >= 0:
            hi *= 2
        fn = lambda r: _inside_objective(u, r)
        rho, its = _bisect(fn, um, hi, tol, decreasing=True, map_back=map_back)
        return rho, True, its, abs(fn(rho))

    # Branch B: centre outside; the longest side spans the major arc.
    fn = lambda r: _outside_objective(u, m, r)
    hi = 10 * sum(u)
    while fn(hi) <= 0:
        hi *= 2
        if not math.isfinite(hi):
            raise SolverError("could not bracket the circumradius")
    rho, its = _bisect(fn, um, hi, tol, decreasing=False, map_back=map_back)
    return rho, False, its, abs(fn(rho))


def _side_half_chords(g: Geometry, sides) -> list[float]:
    sides = [float(x) for x in sides]
    if len(sides) < 3:
        raise GeometryError(f"a polygon needs at least 3 sides, got {len(sides)}")
    if not all(x > 0 and math.isfinite(x) for x in sides):
        raise InfeasibleSides("side lengths must be positive and finite")
    if g is SPHERICAL:
        if max(sides) > math.pi:
            raise GeometryError("spherical side lengths must be at most pi")
        if sum(sides) > _TWO_PI * (1 + 1e-12):
            raise SphericalInfeasible("spherical perimeter must not exceed 2*pi")
    return [half_chord(x, g) for x in sides]


def _solve(g: Geometry, u, tol):
    # On the sphere r = arcsin(rho) is steep near pi/2, so also converge in r.
    map_back = (lambda x: math.asin(min(x, 1.0))) if g is SPHERICAL else None
    return solve_rho(u, tol, map_back)


def _rho_to_radius_checked(rho: float, g: Geometry) -> float:
    if g is SPHERICAL:
        if rho > 1 + 1e-12:
            raise SphericalInfeasible("sides need a circle larger than a great circle")
        rho = min(rho, 1.0)
    return rho_to_radius(rho, g)


def circumradius_from_sides(g, sides, tol: float = DEFAULT_TOL) -> SolveReport:
    """Circumradius of the convex cyclic polygon with the given sides in order."""
    g = Geometry.parse(g)
    u = _side_half_chords(g, sides)
    rho, inside, its, res = _solve(g, u, tol)
    return SolveReport(_rho_to_radius_checked(rho, g), rho, inside, its, res)


def polygon_from_sides(g, sides, tol: float = DEFAULT_TOL) -> CyclicPolygon:
    """Place the solved polygon with vertex 0 at angle 0, counter-clockwise."""
    g = Geometry.parse(g)
    u = _side_half_chords(g, sides)
    rho, inside, _, _ = _solve(g, u, tol)
    r = _rho_to_radius_checked(rho, g)
    arcs = [2 * _asin_ratio(v, rho) for v in u]
    if not inside:
        m = max(range(len(u)), key=u.__getitem__)
        arcs[m] = _TWO_PI - arcs[m]
    angles, t = [], 0.0
    for a in arcs[:-1]:
        angles.append(t)
        t += a
    angles.append(t)
    return CyclicPolygon(g, r, tuple(angles))


def diagonal_from_sides(g, sides, i: int, j: int, tol: float = DEFAULT_TOL) -> float:
    n = len(sides)
    gap = (j - i) % n
    if gap < 2 or gap > n - 2:
        raise IndexError(f"({i}, {j}) is a side or a vertex, not a diagonal")
    return chord_length(polygon_from_sides(g, sides, tol), i % n, j % n)


def all_diagonals(g, sides, tol: float = DEFAULT_TOL) -> dict[tuple[int, int], float]:
    P = polygon_from_sides(g, sides, tol)
    n = P.n
    return {
        (i, j): chord_length(P, i, j)
        for i in range(n)
        for j in range(i + 2, n)
        if not (i == 0 and j == n - 1)
    }


# -- closed forms ------------------------------------------------------------------


def _radius_from_quarter_square(q: float, g: Geometry) -> float:
    # q = s(2r)^2 / 4
    return _rho_to_radius_checked(2 * math.sqrt(q), g)


def triangle_circumradius(a: float, b: float, c: float, g) -> float:
    g = Geometry.parse(g)
    sa, sb, sc = _side_half_chords(g, (a, b, c))
    A = sa + sb + sc
    den = A * (A - 2 * sa) * (A - 2 * sb) * (A - 2 * sc)
    if min(A - 2 * sa, A - 2 * sb, A - 2 * sc) <= 0:
        raise InfeasibleSides("degenerate triangle")
    return _radius_from_quarter_square((sa * sb * sc) ** 2 / den, g)


def _quad_half_chords(a, b, c, d, g):
    s = _side_half_chords(g, (a, b, c, d))
    A = sum(s)
    if min(A - 2 * v for v in s) <= 0:
        raise InfeasibleSides("sides violate the half-chord polygon inequality")
    return s


def quad_diagonals(a: float, b: float, c: float, d: float, g) -> tuple[float, float]:
    """Diagonals (l_02, l_13) of the cyclic quadrilateral with sides l_01, l_12, l_23, l_30."""
    g = Geometry.parse(g)
    sa, sb, sc, sd = _quad_half_chords(a, b, c, d, g)
    ptolemy = sa * sc + sb * sd
    adbc = sa * sd + sb * sc
    abcd = sa * sb + sc * sd
    se = math.sqrt(ptolemy * adbc / abcd)
    sf = math.sqrt(ptolemy * abcd / adbc)
    if g is SPHERICAL:
        se, sf = min(se, 1.0), min(sf, 1.0)
    return half_chord_inverse(se, g), half_chord_inverse(sf, g)


def quad_circumradius(a: float, b: float, c: float, d: float, g) -> float:
    g = Geometry.parse(g)
    s = _quad_half_chords(a, b, c, d, g)
    sa, sb, sc, sd = s
    A = sum(s)
    num = (sa * sb + sc * sd) * (sa * sc + sb * sd) * (sa * sd + sb * sc)
    den = math.prod(A - 2 * v for v in s)
    return _radius_from_quarter_square(num / den, g)

