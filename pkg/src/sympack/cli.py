"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 when the input is
outside what the methods cover (bad parameters, beyond the finite class
list, malformed rationals or files).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import constructions as cons
from . import euclid
from .errors import BeyondDemazureRange, InvalidPolygon, RangeError, SympackError, VerificationFailure
from .geometry import as_rational, format_rational
from .homology import classes_for_model
from .packing import (
    CP2,
    Ball,
    Ellipsoid,
    Polydisc,
    SigmaGBundle,
    TrivialBundle,
    Twisted,
    jiang_grid_minimum,
    jiang_lower_bound,
    packing_number,
    stability_bounds,
)
from .realnum import DEFAULT_PRECISION
from .serialize import dumps, load_packing, packing_to_json, stack_to_json
from .svg import emit_svg, render_svg

EXIT_OK, EXIT_FAILED, EXIT_RANGE = 0, 1, 2

SHAPES = ("ball4", "cp2", "trivial", "twisted", "sigma-g", "ellipsoid", "ball", "polydisc")


def _rat(s: str) -> Fraction:
    try:
        return as_rational(s)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rat_list(s: str) -> tuple[Fraction, ...]:
    return tuple(_rat(x) for x in s.split(",") if x.strip())


def build_shape(args: argparse.Namespace):
    name = args.shape
    a = args.a if args.a is not None else Fraction(1)
    b = args.b if args.b is not None else Fraction(1)
    if name == "ball4":
        return CP2(Fraction(1))
    if name == "cp2":
        return CP2(a)
    if name == "trivial":
        return TrivialBundle(a, b)
    if name == "twisted":
        return Twisted(a, b)
    if name == "sigma-g":
        return SigmaGBundle(args.genus, a, b, args.twisted_bundle)
    if name == "ellipsoid":
        return Ellipsoid(args.axes or (Fraction(1),))
    if name == "ball":
        return Ball(args.n, a)
    if name == "polydisc":
        return Polydisc(args.axes or (a, b))
    raise RangeError(f"unknown shape {name!r}")


TITLES = {
    "ball4": "p_k(B^4) = p_k(CP^2)",
    "cp2": "p_k(CP^2({a}))",
    "trivial": "p_k(S^2({a}) x S^2({b}))",
    "twisted": "p_k(twisted S^2-bundle, a={a}, b={b})",
}

DEFAULT_KMAX = {"ball4": 8, "cp2": 8, "trivial": 7, "twisted": 7}


def table_rows(args: argparse.Namespace) -> tuple[str, list[tuple[str, str]]]:
    shape = build_shape(args)
    if args.shape not in TITLES:
        raise RangeError("tables are available for ball4, cp2, trivial and twisted")
    kmax = args.kmax or DEFAULT_KMAX[args.shape]
    rows = [(str(k), format_rational(packing_number(shape, k, args.method).p)) for k in range(1, kmax + 1)]
    if isinstance(shape, CP2):
        stable = 9
    else:
        sb = stability_bounds(shape)
        stable = int(sb.exact) if sb.exact is not None else None
    if stable is not None and stable == kmax + 1:
        rows.append((f">={stable}", "1"))
    title = TITLES[args.shape].format(a=format_rational(getattr(shape, "a", 1)),
                                      b=format_rational(getattr(shape, "b", 1)))
    return title, rows


def format_table(title: str, rows: list[tuple[str, str]]) -> str:
    lines = [f"# {title}", "k\tp_k"] + [f"{k}\t{p}" for k, p in rows]
    return "\n".join(lines) + "\n"


def _emit(obj, out) -> None:
    out.write(dumps(obj))


def cmd_pk(args, out) -> int:
    res = packing_number(build_shape(args), args.k, args.method)
    if args.output == "text":
        out.write(f"{format_rational(res.p)}\n")
    else:
        _emit(res.to_json(), out)
    return EXIT_OK


def cmd_table(args, out) -> int:
    title, rows = table_rows(args)
    if args.output == "json":
        _emit({"title": title, "rows": [{"k": k, "p": p} for k, p in rows]}, out)
    else:
        out.write(format_table(title, rows))
    return EXIT_OK


def cmd_classes(args, out) -> int:
    classes = classes_for_model(args.model, args.points)
    if args.output == "text":
        out.write(f"# {len(classes)} classes\n")
        out.write("".join(f"{c}\n" for c in classes))
    else:
        basis = classes[0].basis.names if classes else ()
        _emit({"model": args.model, "points": args.points, "count": len(classes), "basis": list(basis),
               "classes": [list(c.coeffs) for c in classes]}, out)
    return EXIT_OK


def _parse_params(items: Sequence[str], names: Sequence[str]) -> dict:
    params = {}
    for item in items:
        if "=" not in item:
            raise RangeError(f"parameter {item!r} is not of the form name=value")
        k, v = item.split("=", 1)
        if k not in names:
            raise RangeError(f"unknown parameter {k!r}; expected {', '.join(names)}")
        params[k] = int(v) if k in cons.INTEGER_PARAMS else as_rational(v)
    return params


def cmd_pack(args, out) -> int:
    name = args.construction
    if name in ("stack-ball", "ellipsoid-full"):
        params = _parse_params(args.params, ("n", "l") if name == "stack-ball" else ("k",))
        params = {k: int(v) for k, v in params.items()}
        s = cons.build_stack_ball_highdim(**params) if name == "stack-ball" else cons.build_ellipsoid_full(**params)
        rep = cons.verify_stack(s)
        _emit({"packing": stack_to_json(s), "report": rep.to_json()}, out)
        return EXIT_OK if rep.ok else EXIT_FAILED
    if name not in cons.CONSTRUCTIONS:
        raise RangeError(f"unknown construction {name!r}")
    builder, names = cons.CONSTRUCTIONS[name]
    packing = builder(**_parse_params(args.params, names))
    rep = cons.verify(packing)
    if args.emit_svg:
        emit_svg(packing, args.emit_svg)
    if args.output == "svg":
        out.write(render_svg(packing))
    else:
        _emit({"packing": packing_to_json(packing), "report": rep.to_json()}, out)
    return EXIT_OK if rep.ok else EXIT_FAILED


def cmd_verify(args, out) -> int:
    try:
        packing = load_packing(args.config)
    except (OSError, json.JSONDecodeError) as exc:
        raise RangeError(f"cannot read {args.config}: {exc}") from None
    rep = cons.verify(packing)
    if args.output == "svg":
        out.write(render_svg(packing))
    else:
        _emit(rep.to_json(), out)
    if args.emit_svg:
        emit_svg(packing, args.emit_svg)
    return EXIT_OK if rep.ok else EXIT_FAILED


def cmd_euclid(args, out) -> int:
    n, k, prec = args.n, args.k, args.precision
    data = {"n": n, "k": k, "precision": prec, "kappa_n": euclid.unit_ball_volume(n, prec).to_json(),
            "blichfeldt": euclid.blichfeldt_bound(n, prec).to_json(),
            "gritzmann": euclid.gritzmann_bound(n, prec).to_json()}
    if k <= 2 * n:
        data["delta_k"] = euclid.delta_k_ball(n, k, prec).to_json()
    if k >= 2:
        data["obvious_bound"] = format_rational(euclid.obvious_bound(n, k))
    if n >= 2:
        data["sausage"] = euclid.sausage_bound(n, k, prec).to_json()
    if n % 2 == 0:
        try:
            data["symplectic"] = euclid.compare_symplectic_euclidean(n // 2, k, prec).to_json()
        except RangeError as exc:
            data["symplectic"] = {"unavailable": str(exc)}
    _emit(data, out)
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    _emit(stability_bounds(build_shape(args)).to_json(), out)
    return EXIT_OK


def cmd_jiang(args, out) -> int:
    data = {"a": format_rational(args.a), "bound": jiang_lower_bound(args.a, args.precision).to_json()}
    rep = cons.check_jiang_embedding(args.a, args.samples, args.seed)
    data["embedding"] = rep.to_json()
    if args.grid:
        best, where = jiang_grid_minimum(precision=args.precision)
        data["grid_minimum"] = {"value": best.to_json(), "at": format_rational(where)}
    _emit(data, out)
    return EXIT_OK if rep.ok else EXIT_FAILED


def _shape_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--shape", choices=SHAPES, required=required)
    p.add_argument("--a", type=_rat)
    p.add_argument("--b", type=_rat)
    p.add_argument("--genus", type=int, default=1)
    p.add_argument("--twisted-bundle", action="store_true", help="sigma-g: use the twisted bundle")
    p.add_argument("--axes", type=_rat_list, help="comma-separated areas for ellipsoid or polydisc")
    p.add_argument("--n", type=int, default=2, help="ball: half the real dimension")
    p.add_argument("--method", choices=("auto", "infimum", "piecewise"), default="auto")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sympack", description="Exact symplectic packing numbers and packings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pk", help="packing number p_k")
    _shape_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--output", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_pk)

    p = sub.add_parser("table", help="p_k for k = 1..kmax")
    _shape_args(p)
    p.add_argument("--kmax", type=int)
    p.add_argument("--output", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("classes", help="exceptional classes of a blow-up")
    p.add_argument("--model", choices=("cp2", "trivial", "twisted"), required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--output", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("pack", help="build and verify a named construction")
    p.add_argument("--construction", required=True,
                   choices=sorted(cons.CONSTRUCTIONS) + ["ellipsoid-full", "stack-ball"])
    p.add_argument("--params", nargs="*", default=[], metavar="NAME=VALUE")
    p.add_argument("--emit-svg", metavar="PATH")
    p.add_argument("--output", choices=("json", "svg"), default="json")
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("verify", help="verify a packing configuration file")
    p.add_argument("--config", required=True)
    p.add_argument("--emit-svg", metavar="PATH")
    p.add_argument("--output", choices=("json", "svg"), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("euclid", help="Euclidean densities and bounds in dimension n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    p.set_defaults(func=cmd_euclid)

    p = sub.add_parser("bounds", help="bounds on the stability number")
    _shape_args(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("jiang", help="one-ball bound for surface x torus")
    p.add_argument("--a", type=_rat, required=True)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", action="store_true", help="also minimise over a in [1, 100]")
    p.set_defaults(func=cmd_jiang)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_RANGE
    try:
        return args.func(args, out)
    except VerificationFailure as exc:
        err.write(f"verification failed: {exc}\n")
        return EXIT_FAILED
    except (RangeError, BeyondDemazureRange, InvalidPolygon, SympackError, ValueError, TypeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_RANGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
