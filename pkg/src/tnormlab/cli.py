"""Command-line front end.

Subcommands: ``eval`` (evaluate a t-norm or companion at a point),
``verify`` (scaling-equation residual sweep), ``classify`` (family
identification), ``catalog`` (print the six-family table), and
``counterexample`` (hunt a violating triple).

Exit status: 0 when every check passed or the evaluation succeeded, 1 when
a check failed and a witness was emitted, 2 on usage or evaluation errors.

T-norm mini-syntax (one token)::

    min | prod | luk | drastic
    ss:<beta>            Schweizer-Sklar exponent family, beta != 0
    cshelf:<c>           zero below the shelf edge c in (0,1), min above
    osum:[a,e,T;...]     ordinal sum of rescaled summands (inner T is any
                         non-osum, non-expr token)
    expr:<dsl>           expression in x and y, e.g. expr:max(x+y-1,0)

Companions: --f catalog (the family's paired companion), --f canonical
(F(x,y) = T(x,x*y), also the default for verify), or --f-expr '<dsl>'.
The environment variable TNORMLAB_SEED supplies the sweep seed when
--seed is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import dsl
from .analysis import (
    RESIDUAL_CSV_HEADER,
    GridSpec,
    Report,
    check_gph,
    check_unit_scale,
    find_gph_counterexample,
    residual_rows,
)
from .classify import PreconditionError, classify
from .core import (
    Canonical,
    Catalog,
    CompanionF,
    CShelf,
    DomainError,
    Drastic,
    Expr,
    Lukasiewicz,
    Minimum,
    OrdinalSum,
    Product,
    SchweizerSklar,
    TNormSpec,
    eval_companion,
    eval_tnorm,
)

DEFAULT_SEED = 0xC0FFEE


class UsageError(Exception):
    pass


_NAMED = {
    "min": Minimum,
    "minimum": Minimum,
    "prod": Product,
    "product": Product,
    "luk": Lukasiewicz,
    "lukasiewicz": Lukasiewicz,
    "drastic": Drastic,
}


def parse_tnorm_token(token: str, allow_compound: bool = True) -> TNormSpec:
    t = token.strip()
    head = t.lower()
    if head in _NAMED:
        return _NAMED[head]()
    if head.startswith("ss:"):
        try:
            return SchweizerSklar(float(t[3:]))
        except ValueError as err:
            raise UsageError(f"bad ss: parameter in {token!r}: {err}") from err
    if head.startswith("cshelf:"):
        try:
            return CShelf(float(t[7:]))
        except ValueError as err:
            raise UsageError(f"bad cshelf: parameter in {token!r}: {err}") from err
    if head.startswith("osum:"):
        if not allow_compound:
            raise UsageError("ordinal sums cannot nest in the mini-syntax")
        body = t[5:].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise UsageError(f"osum needs the form osum:[a,e,T;...], got {token!r}")
        summands = []
        for part in body[1:-1].split(";"):
            fields = part.split(",")
            if len(fields) != 3:
                raise UsageError(f"osum summand needs a,e,T; got {part!r}")
            try:
                lower = float(fields[0])
                upper = float(fields[1])
            except ValueError as err:
                raise UsageError(f"bad osum bounds in {part!r}: {err}") from err
            inner = parse_tnorm_token(fields[2], allow_compound=False)
            summands.append((lower, upper, inner))
        try:
            return OrdinalSum(summands)
        except (ValueError, DomainError) as err:
            raise UsageError(f"bad ordinal sum {token!r}: {err}") from err
    if head.startswith("expr:"):
        if not allow_compound:
            raise UsageError("expressions cannot nest in the mini-syntax")
        return Expr(dsl.parse(t[5:]))
    raise UsageError(f"unknown t-norm spec {token!r}; see --help for the"
                     " mini-syntax")


def _companion_from_args(args, spec: TNormSpec) -> Optional[CompanionF]:
    picked = []
    if getattr(args, "f", None):
        picked.append(args.f)
    if getattr(args, "f_expr", None):
        picked.append("expr")
    if getattr(args, "f_catalog", False):
        picked.append("catalog")
    if len(picked) > 1:
        raise UsageError("choose one companion source: --f, --f-expr or"
                         " --f-catalog")
    if not picked:
        return None
    choice = picked[0]
    if choice == "expr":
        return Expr(dsl.parse(args.f_expr))
    if choice == "catalog":
        try:
            return Catalog(spec)
        except ValueError as err:
            raise UsageError(str(err)) from err
    return Canonical(spec)


def _grid_from_args(args) -> GridSpec:
    seed = args.seed
    if seed is None:
        env = os.environ.get("TNORMLAB_SEED")
        seed = int(env, 0) if env else DEFAULT_SEED
    return GridSpec(points=args.points, eq_tol=args.tol,
                    strict_tol=args.strict_tol, samples=args.samples,
                    seed=seed, step_h=args.step_h)


def _write(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_report(args, report: Report, spec=None, companion=None,
                 grid: Optional[GridSpec] = None) -> None:
    if getattr(args, "csv", False):
        lines = [RESIDUAL_CSV_HEADER]
        for lam, x, y, lhs, rhs, res in residual_rows(spec, companion, grid):
            lines.append(f"{lam!r},{x!r},{y!r},{lhs!r},{rhs!r},{res!r}")
        _write(args, "\n".join(lines))
        return
    if getattr(args, "json", False):
        _write(args, report.to_json())
        return
    _write(args, report.summary())


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def _cmd_eval(args) -> int:
    spec = parse_tnorm_token(args.tnorm)
    companion = _companion_from_args(args, spec)
    if companion is None:
        value = eval_tnorm(spec, args.x, args.y)
    else:
        value = eval_companion(companion, args.x, args.y)
    if getattr(args, "csv", False):
        raise UsageError("eval has no CSV form")
    if args.json:
        _write(args, json.dumps({"command": "eval", "tnorm": args.tnorm,
                                 "x": args.x, "y": args.y, "value": value},
                                indent=2))
    else:
        _write(args, format(value, ".12g"))
    return 0


def _cmd_verify(args) -> int:
    spec = parse_tnorm_token(args.tnorm)
    companion = _companion_from_args(args, spec)
    grid = _grid_from_args(args)
    if companion is not None:
        # the boundary axiom forces F(1, t) = t; test that line first
        pre = check_unit_scale(companion, grid)
        if not pre.passed:
            _emit_report(args, pre, spec, companion, grid)
            return 1
    report = check_gph(spec, companion, grid)
    _emit_report(args, report, spec, companion, grid)
    return 0 if report.passed else 1


def _cmd_counterexample(args) -> int:
    spec = parse_tnorm_token(args.tnorm)
    grid = _grid_from_args(args)
    report = find_gph_counterexample(spec, grid)
    _emit_report(args, report, spec, None, grid)
    return 0 if report.passed else 1


def _cmd_classify(args) -> int:
    spec = parse_tnorm_token(args.tnorm)
    grid = _grid_from_args(args)
    result = classify(spec, grid, assoc_full=args.assoc_full)
    if getattr(args, "csv", False):
        raise UsageError("classify has no CSV form")
    if args.json:
        _write(args, result.to_json())
    else:
        lines = [f"family={result.family}"
                 f" parameter={'-' if result.parameter is None else format(result.parameter, '.12g')}"
                 f" residual={result.residual:.3e}"]
        for entry in result.evidence:
            lines.append(f"  {entry['test']}: "
                         f"{'pass' if entry['passed'] else 'fail'} {entry['detail']}")
        _write(args, "\n".join(lines))
    return 0 if result.family != "NotGPH" else 1


_CATALOG_TABLE = [
    {"kind": "Minimum", "spec": "min", "tnorm": "min(x, y)", "companion": "x*y"},
    {"kind": "SchweizerSklar (beta > 0)", "spec": "ss:2",
     "tnorm": "(max(x^b + y^b - 1, 0))^(1/b) on (0,1]^2, else 0",
     "companion": "(max(x^b + (x*y)^b - 1, 0))^(1/b) on (0,1]^2, else 0"},
    {"kind": "Product", "spec": "prod", "tnorm": "x*y", "companion": "x^2*y"},
    {"kind": "SchweizerSklar (beta < 0)", "spec": "ss:-1",
     "tnorm": "(x^b + y^b - 1)^(1/b) on (0,1]^2, else 0",
     "companion": "(x^b + (x*y)^b - 1)^(1/b) on (0,1]^2, else 0"},
    {"kind": "CShelf", "spec": "cshelf:0.5",
     "tnorm": "0 on (0,1)^2 outside [c,1)^2, else min(x, y)",
     "companion": "0 where (x, x*y) is in that zero region, else x*y"},
    {"kind": "Drastic", "spec": "drastic",
     "tnorm": "min(x, y) if max(x, y) = 1, else 0",
     "companion": "0 for x < 1; y at x = 1"},
]


def _cmd_catalog(args) -> int:
    if getattr(args, "csv", False):
        raise UsageError("catalog has no CSV form")
    if args.json:
        _write(args, json.dumps({"families": _CATALOG_TABLE}, indent=2))
        return 0
    lines = ["Families admitting a companion under T(l*x, l*y) = F(l, T(x, y)):",
             ""]
    for row in _CATALOG_TABLE:
        lines.append(f"{row['kind']}  (e.g. --tnorm {row['spec']})")
        lines.append(f"  T(x, y) = {row['tnorm']}")
        lines.append(f"  F(x, y) = {row['companion']}")
        lines.append("")
    lines.append("Everything else fails verify/counterexample; in particular"
                 " every non-trivial ordinal sum does.")
    _write(args, "\n".join(lines))
    return 0


# --------------------------------------------------------------------------
# Parser assembly
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    epilog = "T-norm mini-syntax" + __doc__.split("T-norm mini-syntax", 1)[1]
    parser = argparse.ArgumentParser(
        prog="tnormlab",
        description="Evaluate, verify, and classify t-norms under the"
                    " scaling equation T(l*x, l*y) = F(l, T(x, y)).",
        epilog=epilog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tnorm_p = argparse.ArgumentParser(add_help=False)
    tnorm_p.add_argument("--tnorm", required=True,
                         help="t-norm mini-syntax token (see epilog)")

    comp_p = argparse.ArgumentParser(add_help=False)
    comp_p.add_argument("--f", choices=["catalog", "canonical"],
                        help="companion source; default for verify is the"
                             " canonical F(x,y) = T(x, x*y)")
    comp_p.add_argument("--f-expr", metavar="DSL",
                        help="companion as a DSL expression in x and y")
    comp_p.add_argument("--f-catalog", action="store_true",
                        help="alias for --f catalog")

    grid_p = argparse.ArgumentParser(add_help=False)
    grid_p.add_argument("--points", type=int, default=101,
                        help="grid resolution per axis (default 101)")
    grid_p.add_argument("--tol", type=float, default=1e-9,
                        help="equality tolerance for sweeps (default 1e-9)")
    grid_p.add_argument("--strict-tol", type=float, default=1e-12,
                        help="tolerance for closed-form identities"
                             " (default 1e-12)")
    grid_p.add_argument("--samples", type=int, default=10_000,
                        help="random triples per sweep (default 10000)")
    grid_p.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                        help="PRNG seed (default: $TNORMLAB_SEED or"
                             " 0xC0FFEE)")
    grid_p.add_argument("--step-h", type=float, default=1e-6,
                        help="one-sided probe distance for limit scans")
    grid_p.add_argument("--assoc-full", action="store_true",
                        help="associativity over the full points^3 cube")

    out_p = argparse.ArgumentParser(add_help=False)
    out_p.add_argument("--json", action="store_true", help="JSON report")
    out_p.add_argument("--csv", action="store_true",
                       help="CSV residual dump (verify/counterexample)")
    out_p.add_argument("--out", metavar="PATH", help="write output to a file")

    p_eval = sub.add_parser("eval", parents=[tnorm_p, comp_p, out_p],
                            help="evaluate T(x, y) or F(x, y) at one point")
    p_eval.add_argument("--x", type=float, required=True)
    p_eval.add_argument("--y", type=float, required=True)
    p_eval.set_defaults(func=_cmd_eval)

    p_verify = sub.add_parser("verify", parents=[tnorm_p, comp_p, grid_p, out_p],
                              help="sweep the scaling equation residual")
    p_verify.set_defaults(func=_cmd_verify)

    p_classify = sub.add_parser("classify", parents=[tnorm_p, grid_p, out_p],
                                help="identify the family of a t-norm")
    p_classify.set_defaults(func=_cmd_classify)

    p_catalog = sub.add_parser("catalog", parents=[out_p],
                               help="print the six-family table")
    p_catalog.set_defaults(func=_cmd_catalog)

    p_counter = sub.add_parser("counterexample", parents=[tnorm_p, grid_p, out_p],
                               help="hunt a triple violating the scaling"
                                    " equation")
    p_counter.set_defaults(func=_cmd_counterexample)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"tnormlab: {err}", file=sys.stderr)
        return 2
    except dsl.ParseError as err:
        print(f"tnormlab: expression error {err}", file=sys.stderr)
        return 2
    except (dsl.EvalError, DomainError, PreconditionError, ValueError) as err:
        print(f"tnormlab: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
