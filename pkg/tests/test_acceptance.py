"""Acceptance gate.

Each criterion is a function returning ``(passed, detail)``.  The pytest
wrappers assert on them and ``conftest.py`` prints one PASS/FAIL line per
criterion at the end of the run.  Running this file directly prints the same
lines without pytest.
"""
import contextlib
import io
import math
import time
from pathlib import Path

import numpy as np
import pytest

from cyclicpoly import cli
from cyclicpoly.core import (
    EUCLIDEAN,
    ModelPoint,
    SPHERICAL,
    central_angle,
    circle_point,
    distance,
    half_chord,
    radial_scale,
    radius_to_rho,
    stereographic,
    stereographic_inverse,
)
from cyclicpoly.identities import (
    GregoracCheck,
    builtin_identities,
    cross_geometry_verify,
    is_homogeneous,
)
from cyclicpoly.polygon import (
    circumradius_from_sides,
    diagonal_from_sides,
    quad_circumradius,
    quad_diagonals,
    side_lengths,
    triangle_circumradius,
)
from cyclicpoly.sampling import (
    GEOMETRIES,
    random_angles,
    random_outside_polygon,
    random_polygon,
    random_radius,
    stream,
)

SEED = 2026
GOLDEN = Path(__file__).parent / "golden"

RESULTS: dict[str, tuple[bool, str]] = {}


def rel_err(a, b):
    return abs(a - b) / abs(b)


def criterion(key, title):
    def wrap(fn):
        def run():
            if key not in RESULTS:
                t0 = time.perf_counter()
                ok, detail = fn()
                RESULTS[key] = (ok, f"{title}: {detail} [{time.perf_counter() - t0:.1f}s]")
            return RESULTS[key]
        run.key = key
        return run
    return wrap


@criterion("1", "chord law")
def chord_law():
    worst = 0.0
    for gi, g in enumerate(GEOMETRIES):
        rng = stream(SEED, 1, gi)
        for _ in range(1000):
            r = random_radius(rng, g)
            a, b = rng.uniform(0, 2 * math.pi, 2)
            p, q = circle_point(r, a, g), circle_point(r, b, g)
            expect = radius_to_rho(r, g) * abs(math.sin((a - b) / 2))
            if expect < 1e-300:
                continue
            worst = max(worst, rel_err(half_chord(distance(p, q), g), expect))
    return worst <= 1e-11, f"max rel err {worst:.2e} (tol 1e-11)"


@criterion("2", "solver round trip")
def solver_round_trip():
    worst, flips = 0.0, 0
    for gi, g in enumerate(GEOMETRIES):
        for t in range(1000):
            rng = stream(SEED, 2, gi, t)
            n = 3 + t % 6
            P = random_outside_polygon(rng, g, n) if t % 2 == 0 else random_polygon(rng, g, n)
            rep = circumradius_from_sides(g, side_lengths(P))
            worst = max(worst, rel_err(rep.radius, P.radius))
            flips += rep.center_inside != P.center_inside
    return worst <= 1e-10 and flips == 0, f"max rel err {worst:.2e} (tol 1e-10), branch mismatches {flips}"


@criterion("3", "closed-form catalog")
def closed_forms():
    e345 = abs(triangle_circumradius(3, 4, 5, GEOMETRIES[0]) - 2.5)
    sq = abs(quad_circumradius(1, 1, 1, 1, GEOMETRIES[0]) - 2 ** -0.5)
    worst = 0.0
    for gi, g in enumerate(GEOMETRIES):
        for t in range(1000):
            rng = stream(SEED, 3, gi, t)
            tri = side_lengths(random_polygon(rng, g, 3))
            worst = max(worst, rel_err(triangle_circumradius(*tri, g),
                                       circumradius_from_sides(g, tri).radius))
            quad = side_lengths(random_polygon(rng, g, 4))
            worst = max(worst, rel_err(quad_circumradius(*quad, g),
                                       circumradius_from_sides(g, quad).radius))
            e, f = quad_diagonals(*quad, g)
            worst = max(worst, rel_err(e, diagonal_from_sides(g, quad, 0, 2)))
            worst = max(worst, rel_err(f, diagonal_from_sides(g, quad, 1, 3)))
    ok = e345 <= 1e-13 and sq <= 1e-13 and worst <= 1e-9
    return ok, f"3-4-5 err {e345:.1e}, square err {sq:.1e} (tol 1e-13), closed vs solver {worst:.2e} (tol 1e-9)"


@criterion("4", "identity transfer")
def identity_transfer():
    ids = builtin_identities()
    worst = {}
    for name, f in ids.items():
        rep = cross_geometry_verify(f, 1000, seed=SEED, tol=1e-9)
        worst[name] = max(rep.max_rel_residual.values())
    held = all(w <= 1e-9 for w in worst.values())
    names = sorted(ids)
    survived = []
    for k in range(20):
        f = ids[names[k % len(names)]]
        bad = f.bumped(k % len(f.terms), delta=1 + k // len(names))
        rep = cross_geometry_verify(bad, 50, seed=SEED, tol=1e-9)
        if any(rep.holds_in.values()):
            survived.append(str(bad))
    detail = ", ".join(f"{k} {v:.1e}" for k, v in sorted(worst.items()))
    return held and not survived, f"{detail} (tol 1e-9); perturbed survivors {len(survived)}/20"


@criterion("5", "gregorac determinant")
def gregorac():
    worst = 0.0
    for half in (4, 5, 6):
        rep = cross_geometry_verify(GregoracCheck(half), 200, seed=SEED, tol=1e-9)
        worst = max(worst, *rep.max_rel_residual.values())
    return worst <= 1e-9, f"max |det|/scale {worst:.2e} (tol 1e-9)"


@criterion("6", "homogeneity and scaling")
def homogeneity_scaling():
    degrees = {name: is_homogeneous(f) for name, f in builtin_identities().items()}
    uniform = all(d is not None and d > 0 for d in degrees.values())
    worst, cases = 0.0, 0
    for gi, g in enumerate(GEOMETRIES):
        for t in range(200):
            rng = stream(SEED, 6, gi, t)
            P = random_polygon(rng, g, 3 + t % 5)
            verts = P.vertices()
            for x in (0.1, 0.5, 2.0, 10.0):
                if g is SPHERICAL and x * math.sin(P.radius) > 1:
                    continue
                moved = [radial_scale(v, x) for v in verts]
                cases += 1
                for i in range(P.n):
                    for j in range(i + 1, P.n):
                        before = half_chord(distance(verts[i], verts[j]), g)
                        after = half_chord(distance(moved[i], moved[j]), g)
                        worst = max(worst, rel_err(after, x * before))
    ok = uniform and worst <= 1e-11
    return ok, f"degrees {sorted(set(degrees.values()))}, scaling max rel err {worst:.2e} over {cases} cases (tol 1e-11)"


@criterion("7", "stereographic projection")
def stereo():
    rng = stream(SEED, 7)
    trip = angle = circ = 0.0
    for _ in range(1000):
        xy = rng.normal(scale=3.0, size=2)
        back = stereographic(stereographic_inverse(ModelPoint(EUCLIDEAN, (float(xy[0]), float(xy[1])))))
        trip = max(trip, float(np.hypot(*(np.array(back.coords) - xy))))
        r = random_radius(rng, SPHERICAL)
        a, b = random_angles(rng, 2)
        p, q = circle_point(r, a, SPHERICAL), circle_point(r, b, SPHERICAL)
        pp, qq = stereographic(p), stereographic(q)
        delta = abs(central_angle(p, q) - central_angle(pp, qq))
        angle = max(angle, min(delta, 2 * math.pi - delta))
        circ = max(circ, abs(math.hypot(*pp.coords) - math.tan(r / 2)))
    ok = max(trip, angle, circ) <= 1e-12
    return ok, f"round trip {trip:.1e}, angle {angle:.1e}, tan(r/2) {circ:.1e} (tol 1e-12)"


GOLDEN_CASES = {
    "solve_euclidean_345.json": ["solve", "--geometry", "euclidean", "--sides", "3,4,5", "--json"],
    "solve_hyperbolic_square.json": ["solve", "--geometry", "hyperbolic", "--sides", "1,1,1,1", "--json"],
    "diagonals_euclidean_3434.json": ["diagonals", "--geometry", "euclidean", "--sides", "3,4,3,4", "--json"],
    "verify_ptolemy_seed42.json": ["verify", "ptolemy", "--seed", "42", "--json"],
}


@criterion("8", "CLI determinism")
def golden():
    mismatched = []
    for name, argv in GOLDEN_CASES.items():
        expected = (GOLDEN / name).read_text()
        for _ in range(2):
            buf = io.StringIO()
            with contextlib.redirect_stdout(buf):
                code = cli.main(list(argv))
            if code != 0 or buf.getvalue() != expected:
                mismatched.append(name)
                break
    return not mismatched, f"{len(GOLDEN_CASES) - len(mismatched)}/{len(GOLDEN_CASES)} golden files byte-identical"


CRITERIA = [chord_law, solver_round_trip, closed_forms, identity_transfer,
            gregorac, homogeneity_scaling, stereo, golden]


@pytest.mark.parametrize("check", CRITERIA, ids=[c.key for c in CRITERIA])
def test_criterion(check):
    ok, detail = check()
    assert ok, detail


def summary_lines():
    return [f"[{'PASS' if ok else 'FAIL'}] {key}. {detail}" for key, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for c in CRITERIA:
        c()
    print("\n".join(summary_lines()))
