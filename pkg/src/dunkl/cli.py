"""Batch command-line front end.

Subcommands: build, intertwine, lambda-table, kernel-grid, ek-eval, verify,
export-quadrature.  Output is plot-ready CSV or JSON on stdout (or --out);
floats are printed with 17 significant digits so they round-trip.  Exit
codes: 0 success, 1 verification failure, 2 configuration error.  The
context cache directory defaults to DUNKL_CACHE_DIR (or the working
directory).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .config import (
    ConfigError,
    ContextBundle,
    build_bundle,
    literal_to_polynomial,
    load_config,
    load_context,
    polynomial_to_literal,
    save_context,
)
from .exact import format_rational, imag_part, real_part
from .kernel import lk_grid, make_evaluator, tail_bound
from .operators import (
    GroupAlgebraElement,
    NotInMStarError,
    TruncationError,
    dunkl_kernel,
    intertwine,
)
from .quad import export_rule_csv, gauss_rule
from .reflection_groups import GroupClosureError, MultiplicityError
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _out_stream(path):
    return open(path, "w") if path else sys.stdout


def _write(path, text):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    cfg = load_config(args.config)
    bundle = build_bundle(cfg)
    degree = args.degree if args.degree is not None else bundle.degree
    try:
        bundle.ctx.prepare(degree)
    except NotInMStarError as exc:
        print(f"build failed: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    ctx = bundle.ctx
    print(f"context {bundle.name}: |G| = {bundle.group.order}")
    gamma = ctx.gamma
    if imag_part(gamma):
        print(f"gamma = {format_rational(real_part(gamma))} + {format_rational(imag_part(gamma))} i")
    else:
        print(f"gamma = {format_rational(real_part(gamma))}")
    for n in range(1, degree + 1):
        path = "group-algebra" if isinstance(ctx.h_cache[n], GroupAlgebraElement) else "matrix-fallback"
        print(f"  degree {n}: invertible ({path})")
    print(f"delta_hat = {_fmt(ctx.delta_hat)} (from degrees 1..{degree})")
    print("n * max |lambda_n(g)| table:")
    for n, row in ctx.delta_table:
        print(f"  {n:3d}  {_fmt(row)}")
    out = args.out or os.path.join(_cache_dir(), f"{bundle.name}.ctx.json")
    save_context(bundle, out)
    print(f"cached exact context to {out}")
    return EXIT_OK


def _cache_dir():
    return os.environ.get("DUNKL_CACHE_DIR", ".")


def _load_bundle(path) -> ContextBundle:
    return load_context(path)


def cmd_intertwine(args) -> int:
    bundle = _load_bundle(args.context)
    p = literal_to_polynomial(args.poly, bundle.group.dimension)
    bundle.ctx.prepare(max(p.degree, 1))
    print(polynomial_to_literal(intertwine(bundle.ctx, p)))
    return EXIT_OK


def cmd_lambda_table(args) -> int:
    bundle = _load_bundle(args.context)
    degree = args.degree if args.degree is not None else bundle.degree
    bundle.ctx.prepare(degree)
    lines = ["n,element,re,im"]
    for n in range(1, degree + 1):
        h = bundle.ctx.h_cache[n]
        if not isinstance(h, GroupAlgebraElement):
            continue
        for idx, c in enumerate(h.coefficients):
            lines.append(
                f"{n},{idx},{_fmt(float(real_part(c)))},{_fmt(float(imag_part(c)))}"
            )
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def parse_grid(spec: str, d: int):
    """Grid spec "x1:lo:hi:step,y1:lo:hi:step,x2:0.3"; unlisted coordinates 0."""
    axes = {}
    for chunk in spec.split(","):
        parts = chunk.strip().split(":")
        name = parts[0].strip()
        if name[0] not in "xy" or not name[1:].isdigit():
            raise ConfigError(f"bad grid coordinate {name!r}")
        idx = int(name[1:]) - 1
        if not 0 <= idx < d:
            raise ConfigError(f"coordinate {name} out of range for dimension {d}")
        if len(parts) == 2:
            values = [float(parts[1])]
        elif len(parts) == 4:
            lo, hi, step = (float(t) for t in parts[1:])
            if step <= 0 or hi < lo:
                raise ConfigError(f"bad range in {chunk!r}")
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            values = [lo + i * step for i in range(count)]
        else:
            raise ConfigError(f"bad grid chunk {chunk!r}")
        axes[(name[0], idx)] = values
    x_axes = [axes.get(("x", i), [0.0]) for i in range(d)]
    y_axes = [axes.get(("y", i), [0.0]) for i in range(d)]
    xs = _product(x_axes)
    ys = _product(y_axes)
    return xs, ys


def _product(axes):
    out = [()]
    for vals in axes:
        out = [p + (v,) for p in out for v in vals]
    return out


def cmd_kernel_grid(args) -> int:
    bundle = _load_bundle(args.context)
    d = bundle.group.dimension
    degree = args.degree if args.degree is not None else (14 if d <= 2 else 10)
    ev = make_evaluator(bundle.ctx, degree, exact_tables=False)
    xs, ys = parse_grid(args.grid, d)
    tol = args.tol
    worst = None
    for x in xs:
        xn = math.sqrt(sum(t * t for t in x))
        for y in ys:
            yn = math.sqrt(sum(t * t for t in y))
            tb = tail_bound(ev, xn, yn)
            if worst is None or tb.value > worst.value:
                worst = tb
    if tol is not None and worst is not None and not worst.value < tol:
        from .kernel import certified_radius

        radius = certified_radius(ev, tol, max(
            math.sqrt(sum(t * t for t in y)) for y in ys
        ))
        print(
            f"refusing grid: tail bound {worst.value:.3g} at |x| = {worst.x_norm:.3g} "
            f"exceeds tol = {tol:.3g}; certified |x| radius at this truncation is "
            f"{radius:.4g}",
            file=sys.stderr,
        )
        return EXIT_CONFIG
    values = lk_grid(ev, xs, ys)
    header = (
        ",".join(f"x{i + 1}" for i in range(d))
        + ","
        + ",".join(f"y{i + 1}" for i in range(d))
        + ",re(L),im(L),tail_bound"
    )
    lines = [header]
    for i, x in enumerate(xs):
        xn = math.sqrt(sum(t * t for t in x))
        for j, y in enumerate(ys):
            yn = math.sqrt(sum(t * t for t in y))
            tb = tail_bound(ev, xn, yn)
            v = values[i, j]
            coords = ",".join(_fmt(t) for t in x) + "," + ",".join(_fmt(t) for t in y)
            lines.append(f"{coords},{_fmt(v.real)},{_fmt(v.imag)},{_fmt(tb.value)}")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_ek_eval(args) -> int:
    bundle = _load_bundle(args.context)
    d = bundle.group.dimension
    x = tuple(float(t) for t in args.x.split(","))
    y = tuple(float(t) for t in args.y.split(","))
    if len(x) != d or len(y) != d:
        print(f"points must have dimension {d}", file=sys.stderr)
        return EXIT_CONFIG
    bundle.ctx.prepare(max(bundle.degree, 1))
    try:
        val = dunkl_kernel(bundle.ctx, x, y, tol=args.tol)
    except TruncationError as exc:
        print(f"ek-eval failed: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    v = complex(val.value)
    print(f"E(x, y) = {_fmt(v.real)} + {_fmt(v.imag)} i")
    print(f"degree used = {val.degree_used}")
    print(f"tail bound = {_fmt(val.tail_bound)}")
    print(f"last term = {_fmt(val.last_term)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    bundle = _load_bundle(args.context)
    report = run_suite(bundle, args.suite, seed=args.seed)
    text = json.dumps(report.to_json(), indent=1, sort_keys=True) + "\n"
    _write(args.out, text)
    if args.out:
        status = "PASS" if report.passed else "FAIL"
        print(f"{args.suite}: {status} ({len(report.results)} checks)")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


def cmd_export_quadrature(args) -> int:
    rule = gauss_rule(args.dim, args.points_per_axis)
    text = export_rule_csv(rule, None)
    _write(args.out, text)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dunkl",
        description="Intertwining-operator computations and identity verification "
        "for finite reflection groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build and cache an exact context from a config")
    p.add_argument("--config", required=True)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("intertwine", help="apply the intertwining operator to a literal")
    p.add_argument("--context", required=True)
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_intertwine)

    p = sub.add_parser("lambda-table", help="CSV of the group-algebra coefficients")
    p.add_argument("--context", required=True)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_lambda_table)

    p = sub.add_parser("kernel-grid", help="kernel values with tail bounds on a grid")
    p.add_argument("--context", required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_kernel_grid)

    p = sub.add_parser("ek-eval", help="evaluate the generalized exponential")
    p.add_argument("--context", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_ek_eval)

    p = sub.add_parser("verify", help="run a verification suite, emit a JSON report")
    p.add_argument("--context", required=True)
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-quadrature", help="CSV of nodes and weights")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--points-per-axis", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export_quadrature)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, MultiplicityError, GroupClosureError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NotInMStarError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
