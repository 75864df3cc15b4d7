"""Command-line front end.

Exit codes: 0 success / identity holds, 1 usage or parse error,
2 infeasible geometric input, 3 identity verification failed.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from cyclicpoly import identities as ids
from cyclicpoly import polygon as poly
from cyclicpoly.core import (
    EUCLIDEAN,
    SPHERICAL,
    Geometry,
    GeometryError,
    ModelPoint,
    stereographic,
    stereographic_inverse,
)
from cyclicpoly.sampling import GEOMETRIES, random_angles, random_radius, stream

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_FAILS = 0, 1, 2, 3

VERIFY_TOL = 1e-9
BUILTINS = ("ptolemy", "fuhrmann", "gregorac", "triangle-radius", "quad-radius", "quad-diagonals")


class UsageError(Exception):
    pass


# -- serialization -----------------------------------------------------------------


def format_real(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    text = format(x, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def dumps(obj, indent: int = 0) -> str:
    """JSON with sorted keys and every real printed to 17 significant digits."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return format_real(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report(command: str, inputs: dict, outputs: dict, tolerance, seed, verdict: str) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "tolerance": tolerance,
        "seed": seed,
        "verdict": verdict,
    }


def polygon_document(P: poly.CyclicPolygon) -> dict:
    return {"geometry": P.geometry.value, "radius": P.radius, "angles": list(P.angles)}


def _emit(doc: dict, as_json: bool, lines):
    if as_json:
        print(dumps(doc))
    else:
        for line in lines:
            print(line)


# -- argument helpers --------------------------------------------------------------


def parse_reals(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"could not parse real list {text!r}") from None
    if not values or not all(math.isfinite(v) for v in values):
        raise UsageError(f"could not parse real list {text!r}")
    return values


def _geometry(name: str) -> Geometry:
    try:
        return Geometry.parse(name)
    except GeometryError as exc:
        raise UsageError(str(exc)) from None


def _opt(args, name, default):
    return getattr(args, name, default)


# -- commands -----------------------------------------------------------------------


def cmd_solve(args) -> int:
    g = _geometry(args.geometry)
    sides = parse_reals(args.sides)
    tol = _opt(args, "tol", poly.DEFAULT_TOL)
    rep = poly.circumradius_from_sides(g, sides, tol)
    branch = "center-inside" if rep.center_inside else "center-outside"
    outputs = {
        "radius": rep.radius,
        "rho": rep.rho,
        "center_inside": rep.center_inside,
        "iterations": rep.iterations,
        "residual": rep.residual,
    }
    doc = report("solve", {"geometry": g.value, "sides": sides}, outputs, tol, None, "ok")
    _emit(doc, args.json, [
        f"radius      {format_real(rep.radius)}",
        f"rho         {format_real(rep.rho)}",
        f"branch      {branch}",
        f"iterations  {rep.iterations}",
        f"residual    {format_real(rep.residual)}",
    ])
    return EXIT_OK


def cmd_diagonals(args) -> int:
    g = _geometry(args.geometry)
    sides = parse_reals(args.sides)
    tol = _opt(args, "tol", poly.DEFAULT_TOL)
    diags = poly.all_diagonals(g, sides, tol)
    radius = poly.circumradius_from_sides(g, sides, tol).radius
    outputs = {"radius": radius, "diagonals": {f"{i}-{j}": v for (i, j), v in diags.items()}}
    doc = report("diagonals", {"geometry": g.value, "sides": sides}, outputs, tol, None, "ok")
    _emit(doc, args.json, [f"d({i},{j})  {format_real(v)}" for (i, j), v in diags.items()])
    return EXIT_OK


def _targets(args) -> list[tuple[str, object]]:
    if args.poly_file:
        try:
            with open(args.poly_file) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.poly_file}: {exc.strerror}") from None
        try:
            f = ids.parse_identity(text, args.n)
        except ids.IdentityParseError as exc:
            raise UsageError(f"{args.poly_file}: {exc}") from None
        return [(args.poly_file, f)]
    name = args.identity
    if name is None:
        raise UsageError("verify needs an identity name or --poly-file")
    if name not in BUILTINS:
        raise UsageError(f"unknown identity {name!r}; choose from {', '.join(BUILTINS)}")
    if name == "gregorac":
        try:
            return [("gregorac", ids.GregoracCheck(args.n or 4))]
        except GeometryError as exc:
            raise UsageError(str(exc)) from None
    table = ids.builtin_identities()
    if name == "quad-diagonals":
        return [(k, table[k]) for k in ("quad-diagonal-e", "quad-diagonal-f")]
    return [(name, table[name])]


def cmd_verify(args) -> int:
    targets = _targets(args)
    tol = _opt(args, "tol", VERIFY_TOL)
    seed = _opt(args, "seed", 0)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    results, lines, verdict = [], [], "holds"
    for label, f in targets:
        rep = ids.cross_geometry_verify(f, args.trials, seed, tol)
        per_geom = {}
        for g in GEOMETRIES:
            entry = {"max_rel_residual": rep.max_rel_residual[g], "holds": rep.holds_in[g]}
            cx = rep.counterexamples.get(g)
            if cx is not None:
                entry["counterexample"] = {
                    "trial": cx.trial,
                    "rel_residual": cx.rel_residual,
                    "polygon": polygon_document(cx.polygon),
                }
            per_geom[g.value] = entry
            state = "holds" if rep.holds_in[g] else "FAILS"
            lines.append(f"{label:16s} {g.value:10s} max rel residual {rep.max_rel_residual[g]:.3e}  {state}")
            if cx is not None:
                lines.append(f"{'':16s} counterexample: trial {cx.trial}, r={format_real(cx.polygon.radius)}, "
                             f"angles={[round(a, 6) for a in cx.polygon.angles]}, rel residual {cx.rel_residual:.3e}")
        item = {"name": label, "n": f.n, "geometries": per_geom, "verdict": rep.verdict}
        if isinstance(f, ids.ChordIdentity):
            item["polynomial"] = str(f)
            item["degree"] = ids.is_homogeneous(f)
        results.append(item)
        if rep.verdict != "holds":
            verdict = "fails"
    lines.append(f"verdict: {verdict}")
    inputs = {"identity": args.poly_file or args.identity, "trials": args.trials, "n": args.n}
    doc = report("verify", inputs, {"identities": results}, tol, seed, verdict)
    _emit(doc, args.json, lines)
    return EXIT_OK if verdict == "holds" else EXIT_FAILS


def cmd_sample(args) -> int:
    g = _geometry(args.geometry)
    seed = _opt(args, "seed", 0)
    if args.n < 3:
        raise UsageError("--n must be at least 3")
    rng = stream(seed)
    r = random_radius(rng, g) if args.radius is None else args.radius
    try:
        P = poly.from_angles(g, r, random_angles(rng, args.n))
    except GeometryError as exc:
        raise UsageError(str(exc)) from None
    doc = polygon_document(P)
    doc["sides"] = poly.side_lengths(P)
    doc["vertices"] = [list(v.coords) for v in P.vertices()]
    doc["seed"] = seed
    _emit(doc, args.json, [
        f"geometry  {g.value}",
        f"radius    {format_real(P.radius)}",
        "angles    " + ", ".join(format_real(a) for a in P.angles),
        "sides     " + ", ".join(format_real(s) for s in doc["sides"]),
    ])
    return EXIT_OK


def _read_points(text: str) -> list[list[float]]:
    if text == "-":
        text = sys.stdin.read()
    try:
        pts = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"points are not valid JSON: {exc.msg}") from None
    if not isinstance(pts, list) or not all(isinstance(p, list) for p in pts):
        raise UsageError("points must be a JSON list of coordinate lists")
    return [[float(c) for c in p] for p in pts]


def _common(values, rel=1e-12):
    return values and max(values) - min(values) <= rel * max(1.0, abs(max(values)))


def cmd_project(args) -> int:
    pts = _read_points(args.points)
    outputs: dict = {}
    try:
        if args.direction == "sphere-to-plane":
            src = [ModelPoint(SPHERICAL, tuple(p)) for p in pts]
            out = [stereographic(p) for p in src]
            zs = [p.coords[2] for p in src]
            if _common(zs) and zs[0] > -1.0:
                r_s = math.acos(max(-1.0, min(1.0, -zs[0])))
                outputs["sphere_radius"] = r_s
                outputs["plane_radius"] = math.tan(r_s / 2)
        else:
            src = [ModelPoint(EUCLIDEAN, tuple(p)) for p in pts]
            out = [stereographic_inverse(p) for p in src]
            norms = [math.hypot(*p.coords) for p in src]
            if _common(norms) and norms[0] > 0:
                outputs["plane_radius"] = norms[0]
                outputs["sphere_radius"] = 2 * math.atan(norms[0])
    except GeometryError as exc:
        raise UsageError(str(exc)) from None
    outputs["points"] = [list(p.coords) for p in out]
    doc = report("project", {"direction": args.direction, "points": pts}, outputs, None, None, "ok")
    lines = ["  ".join(format_real(c) for c in p.coords) for p in out]
    if "plane_radius" in outputs:
        lines.append(f"circle: sphere radius {format_real(outputs['sphere_radius'])} "
                     f"-> plane radius {format_real(outputs['plane_radius'])}")
    _emit(doc, args.json, lines)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print a JSON report")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="solver width tolerance (solve/diagonals) or residual tolerance (verify)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed")

    parser = argparse.ArgumentParser(
        prog="cyclicpoly", parents=[common],
        description="Cyclic polygons in Euclidean, hyperbolic and spherical geometry.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="circumradius from side lengths")
    p.add_argument("--geometry", required=True)
    p.add_argument("--sides", required=True, help="comma-separated side lengths, in order")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("diagonals", parents=[common], help="all diagonals from side lengths")
    p.add_argument("--geometry", required=True)
    p.add_argument("--sides", required=True)
    p.set_defaults(func=cmd_diagonals)

    p = sub.add_parser("verify", parents=[common], help="check an identity in all three geometries")
    p.add_argument("identity", nargs="?", help=", ".join(BUILTINS))
    p.add_argument("--poly-file", help="polynomial in the u_i_j / rho text format")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--n", type=int, default=None,
                   help="vertex count for --poly-file; half the vertex count for gregorac")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", parents=[common], help="random cyclic polygon")
    p.add_argument("--geometry", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--radius", type=float, default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("project", parents=[common], help="stereographic projection")
    p.add_argument("--direction", required=True, choices=("sphere-to-plane", "plane-to-sphere"))
    p.add_argument("--points", required=True, help="JSON list of points, or - for stdin")
    p.set_defaults(func=cmd_project)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.json = getattr(args, "json", False)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except poly.SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
