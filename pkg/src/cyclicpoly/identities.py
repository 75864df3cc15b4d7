"""Polynomial identities among the half-chords of a cyclic polygon.

Variables are ``u_i_j = s(l_ij)`` for vertex pairs ``i < j`` and
``rho = s(2r) / 2``.  An identity that vanishes on every cyclic polygon in one
of the three geometries vanishes on every cyclic polygon in all three, and
:func:`cross_geometry_verify` checks exactly that on random configurations.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Mapping

from cyclicpoly import polygon as poly
from cyclicpoly.core import Geometry, GeometryError
from cyclicpoly.polygon import CyclicPolygon
from cyclicpoly.sampling import GEOMETRIES, random_polygon, stream

RHO = "rho"

Monomial = tuple  # sorted ((variable, power), ...)


class IdentityParseError(ValueError):
    pass


def _var_key(v: str):
    if v == RHO:
        return (1, 0, 0)
    _, i, j = v.split("_")
    return (0, int(i), int(j))


def u_name(i: int, j: int) -> str:
    if i == j:
        raise ValueError("u_i_j needs distinct vertices")
    i, j = min(i, j), max(i, j)
    return f"u_{i}_{j}"


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    powers = dict(a)
    for v, k in b:
        powers[v] = powers.get(v, 0) + k
    return tuple(sorted(powers.items(), key=lambda item: _var_key(item[0])))


@dataclass(frozen=True)
class ChordIdentity:
    """Integer polynomial in the ``u_i_j`` and ``rho`` of an ``n``-gon.

    Terms are kept canonical: one entry per monomial, no zero coefficients,
    sorted by monomial.
    """

    n: int
    terms: tuple[tuple[Monomial, int], ...] = ()

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"identities need n >= 3, got {self.n}")
        for mono, _ in self.terms:
            for v, _k in mono:
                if v != RHO:
                    _, i, j = _var_key(v)
                    if not i < j < self.n:
                        raise ValueError(f"variable {v} out of range for n={self.n}")

    @classmethod
    def from_dict(cls, n: int, coeffs: Mapping[Monomial, int]) -> "ChordIdentity":
        merged: dict[Monomial, int] = {}
        for mono, c in coeffs.items():
            mono = _mono_mul((), mono)
            merged[mono] = merged.get(mono, 0) + int(c)
        key = lambda item: [(_var_key(v), k) for v, k in item[0]]
        return cls(n, tuple(sorted(((m, c) for m, c in merged.items() if c), key=key)))

    @classmethod
    def var(cls, n: int, name: str) -> "ChordIdentity":
        return cls.from_dict(n, {((name, 1),): 1})

    @classmethod
    def const(cls, n: int, c: int) -> "ChordIdentity":
        return cls.from_dict(n, {(): c})

    # arithmetic, for assembling identities

    def _lift(self, other) -> "ChordIdentity":
        if isinstance(other, ChordIdentity):
            return other
        if isinstance(other, int):
            return ChordIdentity.const(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return ChordIdentity.from_dict(max(self.n, other.n), acc)

    __radd__ = __add__

    def __neg__(self):
        return ChordIdentity(self.n, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        acc: dict[Monomial, int] = {}
        for ma, ca in self.terms:
            for mb, cb in other.terms:
                m = _mono_mul(ma, mb)
                acc[m] = acc.get(m, 0) + ca * cb
        return ChordIdentity.from_dict(max(self.n, other.n), acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ChordIdentity.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    # queries

    def degrees(self) -> set[int]:
        return {sum(k for _, k in m) for m, _ in self.terms}

    def variables(self) -> set[str]:
        return {v for m, _ in self.terms for v, _ in m}

    def evaluate_at(self, values: Mapping[str, float]) -> tuple[float, float]:
        """(value, sum of absolute term values) at the given assignment."""
        total = scale = 0.0
        for mono, c in self.terms:
            t = float(c)
            for v, k in mono:
                t *= values[v] ** k
            total += t
            scale += abs(t)
        return total, scale

    def residual(self, P: CyclicPolygon) -> tuple[float, float]:
        return evaluate(self, P)

    def bumped(self, index: int, delta: int = 1) -> "ChordIdentity":
        """Copy with the coefficient of term ``index`` shifted by ``delta``."""
        mono, c = self.terms[index]
        acc = dict(self.terms)
        acc[mono] = c + delta
        return ChordIdentity.from_dict(self.n, acc)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, (mono, c) in enumerate(self.terms):
            sign = "-" if c < 0 else "+"
            body = [f"{v}^{k}" if k > 1 else v for v, k in mono]
            if abs(c) != 1 or not body:
                body.insert(0, str(abs(c)))
            text = " ".join(body)
            if idx == 0:
                parts.append(text if sign == "+" else f"-{text}")
            else:
                parts.append(f"{sign} {text}")
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "ChordIdentity":
        return parse_identity(text, n)


def is_homogeneous(f: ChordIdentity) -> int | None:
    """Common total degree of all terms, or None when degrees differ."""
    degs = f.degrees()
    if not degs:
        return 0
    return degs.pop() if len(degs) == 1 else None


_TOKEN = re.compile(r"^(?:u_(\d+)_(\d+)|(rho))(?:\^(\d+))?$")


def parse_identity(text: str, n: int | None = None) -> ChordIdentity:
    """Parse ``<coeff> [u_i_j^k ...] [rho^k]`` terms joined by ``+``/``-``.

    Without ``n`` the vertex count is one more than the largest index seen
    (at least 3).
    """
    src = text.strip()
    if not src:
        raise IdentityParseError("empty polynomial")
    pieces = re.split(r"([+-])", src)
    coeffs: dict[Monomial, int] = {}
    sign, expect_term, top = 1, True, 2
    for piece in pieces:
        piece = piece.strip()
        if piece in "+-" and piece:
            if not expect_term:
                sign, expect_term = (1 if piece == "+" else -1), True
            elif piece == "-":
                sign = -sign
            continue
        if not piece:
            continue
        if not expect_term:
            raise IdentityParseError(f"missing operator before {piece!r}")
        coeff, powers = 1, {}
        for k, tok in enumerate(piece.split()):
            if k == 0 and tok.isdigit():
                coeff = int(tok)
                continue
            m = _TOKEN.match(tok)
            if not m:
                raise IdentityParseError(f"bad token {tok!r}")
            if m.group(3):
                name = RHO
            else:
                i, j = int(m.group(1)), int(m.group(2))
                if i == j:
                    raise IdentityParseError(f"bad token {tok!r}: repeated vertex")
                name = u_name(i, j)
                top = max(top, i, j)
            powers[name] = powers.get(name, 0) + int(m.group(4) or 1)
        mono = tuple(powers.items())
        coeffs[_mono_mul((), mono)] = coeffs.get(_mono_mul((), mono), 0) + sign * coeff
        sign, expect_term = 1, False
    if expect_term:
        raise IdentityParseError("polynomial ends with an operator")
    size = top + 1 if n is None else n
    try:
        return ChordIdentity.from_dict(size, coeffs)
    except ValueError as exc:
        raise IdentityParseError(str(exc)) from None


def assignment(P: CyclicPolygon) -> dict[str, float]:
    values = {RHO: P.rho / 2}
    for i in range(P.n):
        for j in range(i + 1, P.n):
            values[u_name(i, j)] = poly.chord_half(P, i, j)
    return values


def evaluate(f: ChordIdentity, P: CyclicPolygon) -> tuple[float, float]:
    """(|f|, scale) at the half-chords of ``P``; see :func:`relative_residual`."""
    if f.n != P.n:
        raise GeometryError(f"identity is for {f.n}-gons, polygon has {P.n} vertices")
    value, scale = f.evaluate_at(assignment(P))
    return abs(value), scale


def relative_residual(residual: float, scale: float) -> float:
    return 0.0 if scale == 0 else residual / scale


# -- built-in identities -------------------------------------------------------


def _u(n, i, j):
    return ChordIdentity.var(n, u_name(i, j))


def ptolemy_identity() -> ChordIdentity:
    u = lambda i, j: _u(4, i, j)
    return u(0, 2) * u(1, 3) - u(0, 1) * u(2, 3) - u(1, 2) * u(0, 3)


# Each pair of opposite sides multiplies the main diagonal that touches neither of them.
FUHRMANN_PAIRING = (((0, 1), (3, 4), (2, 5)), ((1, 2), (4, 5), (0, 3)), ((2, 3), (5, 0), (1, 4)))


def fuhrmann_identity(pairing=FUHRMANN_PAIRING) -> ChordIdentity:
    u = lambda ij: _u(6, *ij)
    diag = [u(d) for _, _, d in pairing]
    out = diag[0] * diag[1] * diag[2]
    for side, opposite, d in pairing:
        out = out - u(side) * u(opposite) * u(d)
    out = out - u((0, 1)) * u((2, 3)) * u((4, 5))
    return out - u((1, 2)) * u((3, 4)) * u((5, 0))


def triangle_radius_identity() -> ChordIdentity:
    a, b, c = _u(3, 0, 1), _u(3, 1, 2), _u(3, 0, 2)
    rho = ChordIdentity.var(3, RHO)
    A = a + b + c
    return rho ** 2 * A * (A - 2 * a) * (A - 2 * b) * (A - 2 * c) - (a * b * c) ** 2


def _quad_sides():
    return _u(4, 0, 1), _u(4, 1, 2), _u(4, 2, 3), _u(4, 0, 3)


def quad_radius_identity() -> ChordIdentity:
    a, b, c, d = _quad_sides()
    rho = ChordIdentity.var(4, RHO)
    A = a + b + c + d
    den = (A - 2 * a) * (A - 2 * b) * (A - 2 * c) * (A - 2 * d)
    return rho ** 2 * den - (a * b + c * d) * (a * c + b * d) * (a * d + b * c)


def quad_diagonal_identities() -> tuple[ChordIdentity, ChordIdentity]:
    """Cleared forms of the diagonal formulas, for u_0_2 and u_1_3."""
    a, b, c, d = _quad_sides()
    e, f = _u(4, 0, 2), _u(4, 1, 3)
    ptolemy = a * c + b * d
    return (
        e ** 2 * (a * b + c * d) - ptolemy * (a * d + b * c),
        f ** 2 * (a * d + b * c) - ptolemy * (a * b + c * d),
    )


def builtin_identities() -> dict[str, ChordIdentity]:
    e_form, f_form = quad_diagonal_identities()
    return {
        "ptolemy": ptolemy_identity(),
        "fuhrmann": fuhrmann_identity(),
        "triangle-radius": triangle_radius_identity(),
        "quad-radius": quad_radius_identity(),
        "quad-diagonal-e": e_form,
        "quad-diagonal-f": f_form,
    }


# -- Gregorac determinant --------------------------------------------------------


def lu_determinant(rows) -> float:
    """Determinant by Gaussian elimination with partial pivoting."""
    a = [list(map(float, r)) for r in rows]
    n = len(a)
    det = 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[p][k] == 0.0:
            return 0.0
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        pivot = a[k][k]
        det *= pivot
        for i in range(k + 1, n):
            factor = a[i][k] / pivot
            if factor:
                row, top = a[i], a[k]
                for j in range(k + 1, n):
                    row[j] -= factor * top[j]
    return det


def gregorac_matrix(P: CyclicPolygon) -> list[list[float]]:
    """Matrix with a_ji = (-1)^[i=j] / (s(l_{2i-2,2j-1}) s(l_{2j-1,2i})), 1-based i, j."""
    if P.n % 2 or P.n < 8:
        raise GeometryError(f"needs an even vertex count of at least 8, got {P.n}")
    m = P.n // 2
    s = lambda a, b: poly.chord_half(P, a % P.n, b % P.n)
    mat = [[0.0] * m for _ in range(m)]
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            sign = -1.0 if i == j else 1.0
            mat[j - 1][i - 1] = sign / (s(2 * i - 2, 2 * j - 1) * s(2 * j - 1, 2 * i))
    return mat


def gregorac_determinant(P: CyclicPolygon) -> tuple[float, float]:
    """(det, Hadamard bound) for the Gregorac matrix of a 2n-gon."""
    mat = gregorac_matrix(P)
    scale = math.prod(math.sqrt(sum(x * x for x in row)) for row in mat)
    return lu_determinant(mat), scale


@dataclass(frozen=True)
class GregoracCheck:
    """Adapter so the determinant runs through :func:`cross_geometry_verify`."""

    half: int

    def __post_init__(self):
        if self.half <= 3:
            raise GeometryError(f"Gregorac determinant needs n > 3, got {self.half}")

    @property
    def n(self) -> int:
        return 2 * self.half

    def residual(self, P: CyclicPolygon) -> tuple[float, float]:
        det, scale = gregorac_determinant(P)
        return abs(det), scale

    def __str__(self) -> str:
        return f"gregorac determinant, {self.n}-gon"


# -- verification harness --------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    trial: int
    polygon: CyclicPolygon
    rel_residual: float


@dataclass(frozen=True)
class VerificationReport:
    trials: int
    tol: float
    max_rel_residual: dict[Geometry, float]
    holds_in: dict[Geometry, bool]
    counterexamples: dict[Geometry, Counterexample] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "holds" if all(self.holds_in.values()) else "fails"

    @property
    def first_counterexample(self) -> Counterexample | None:
        for g in GEOMETRIES:
            if g in self.counterexamples:
                return self.counterexamples[g]
        return None


def trial_polygon(seed: int, g: Geometry, trial: int, n: int) -> CyclicPolygon:
    return random_polygon(stream(seed, GEOMETRIES.index(g), trial), g, n)


def cross_geometry_verify(f, trials: int, seed: int = 0, tol: float = 1e-9) -> VerificationReport:
    """Evaluate ``f`` on ``trials`` random polygons per geometry.

    ``f`` is a :class:`ChordIdentity` or anything with ``n`` and
    ``residual(P) -> (residual, scale)``.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    worst, holds, bad = {}, {}, {}
    for g in GEOMETRIES:
        worst[g] = 0.0
        for t in range(trials):
            P = trial_polygon(seed, g, t, f.n)
            rel = relative_residual(*f.residual(P))
            worst[g] = max(worst[g], rel)
            if not rel <= tol and g not in bad:
                bad[g] = Counterexample(t, P, rel)
        holds[g] = g not in bad
    return VerificationReport(trials, tol, worst, holds, bad)
