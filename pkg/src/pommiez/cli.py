"""Command-line front-end.

Verbs: apply, orbit, classify, duhamel, omega, pair, identities, invariance.
Every run emits a single JSON document on stdout; exit code 0 on success,
1 on domain errors, 2 on usage errors (bad flags or malformed expressions).
All rationals are serialized as strings; numeric values carry hex-float
components with a precision annotation plus a decimal rendering.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import mpmath

from . import __version__
from .cyclicity import (
    ClassifyOptions,
    classify,
    invariant_line_matrix,
    nilpotency_index,
    orbit_rank,
)
from .duality import DividedSeries, duhamel
from .errors import (
    ExprSyntaxError,
    NonlinearExponent,
    PommiezError,
    UnsupportedClosedForm,
)
from .funcspace import ExpPoly, TruncatedTaylor
from .leontiev import omega
from .operators import (
    OperatorContext,
    mult_M,
    orbit,
    pommiez,
    pommiez_at,
    pommiez_exact_on_line,
    shift_T,
    shift_Ttilde,
)
from .parser import format_exppoly, parse_expr
from .poly import Poly
from .scalar import BigComplex, GaussRational
from .suites import SUITES, run_suite

USAGE_ERRORS = (ExprSyntaxError, NonlinearExponent)


def _scalar_json(value):
    if isinstance(value, (int, Fraction)):
        value = GaussRational(value)
    if isinstance(value, GaussRational):
        return {"kind": "rational", "value": value.serialize()}
    if isinstance(value, BigComplex):
        doc = value.serialize()
        doc["kind"] = "big"
        with mpmath.workprec(value.precision_bits):
            sign = "+" if value.im >= 0 else ""
            doc["decimal"] = (
                f"{mpmath.nstr(value.re, 25)}{sign}{mpmath.nstr(value.im, 25)}i"
            )
        return doc
    raise TypeError(f"unsupported scalar {type(value).__name__}")


def _jet_json(jet):
    return {
        "kind": "taylor",
        "valid_order": jet.valid_order,
        "coeffs": [_scalar_json(c) for c in jet.coeffs],
    }


def _exppoly_json(f):
    return {
        "kind": "exppoly",
        "expr": format_exppoly(f),
        "terms": [
            {
                "exponent": lam.serialize(),
                "coeffs": [_scalar_json(c) for c in p.coeffs],
            }
            for lam, p in f.sorted_terms()
        ],
    }


def _series_json(s):
    return {
        "kind": "divided",
        "valid_order": s.valid_order,
        "dcoeffs": [_scalar_json(c) for c in s.dcoeffs],
    }


def _parse_rational_scalar(text, flag):
    value = parse_expr(text)
    if value.is_zero():
        return GaussRational(0)
    st = value.single_term()
    if st is None or not st[0].is_zero() or st[1].degree != 0:
        raise ExprSyntaxError(f"--{flag} must be a rational-complex constant", 0)
    return GaussRational(0) + st[1][0]


def _parse_poly(text, flag):
    value = parse_expr(text)
    if value.is_zero():
        return Poly()
    st = value.single_term()
    if st is None or not st[0].is_zero():
        raise ExprSyntaxError(f"--{flag} must be a polynomial in z", 0)
    return st[1]


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="pommiez",
        description="Operator calculus on exponential polynomials",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, g0=True):
        if g0:
            p.add_argument("--g0", default="1", help="generator expression, g0(0) = 1")
        p.add_argument("--precision", type=int, default=128, help="working precision bits")
        p.add_argument(
            "--tol",
            type=int,
            default=None,
            help="tolerance exponent k meaning 2^-k (default precision/2)",
        )

    p = sub.add_parser("apply", help="apply one operator to an expression")
    common(p)
    p.add_argument("--op", required=True,
                   choices=["pommiez", "dz", "shift", "shift-tilde", "mult", "exact-line"])
    p.add_argument("--f", required=True)
    p.add_argument("--z", default="0", help="shift point (rational-complex expression)")
    p.add_argument("--order", type=int, default=8)

    p = sub.add_parser("orbit", help="orbit [f, Df, ..., D^len f]")
    common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--len", dest="length", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "taylor"], default="exact")
    p.add_argument("--order", type=int, default=None)

    p = sub.add_parser("classify", help="cyclicity verdict for f under g0")
    common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--search-radius", default="20", help="case-I sweep radius (rational)")

    p = sub.add_parser("duhamel", help="Duhamel product of two expressions")
    common(p, g0=False)
    p.add_argument("--v", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--order", type=int, default=16, help="series order for the fallback")

    p = sub.add_parser("omega", help="interpolation pairing omega_f(z, x)")
    common(p, g0=False)
    p.add_argument("--f", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--z", required=True)

    p = sub.add_parser("pair", help="duality pairing <x, h>")
    common(p, g0=False)
    p.add_argument("--x", required=True, help="polynomial expression")
    p.add_argument("--h", required=True, help="exponential-polynomial expression")

    p = sub.add_parser("identities", help="run a seeded randomized identity suite")
    common(p)
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("invariance", help="matrix of D on P_n(e_lambda)")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f", default=None, help="optional orbit representative on the line")

    return parser


def _run_apply(args):
    f = parse_expr(args.f)
    z = _parse_rational_scalar(args.z, "z")
    ctx = OperatorContext(parse_expr(args.g0))
    op = args.op
    if op == "mult":
        return {"op": op, "result": _exppoly_json(mult_M(f))}
    if op == "exact-line":
        return {"op": op, "result": _exppoly_json(pommiez_exact_on_line(ctx, f))}
    if op == "pommiez":
        jet = pommiez(ctx, f.taylor(args.order + 1))
        return {"op": op, "result": _jet_json(jet)}
    if op == "dz":
        jet = pommiez_at(f, z, args.order, precision_bits=args.precision)
    elif op == "shift":
        jet = shift_T(ctx, f, z, args.order, precision_bits=args.precision)
    else:
        jet = shift_Ttilde(ctx, f, z, args.order, precision_bits=args.precision)
    return {"op": op, "result": _jet_json(jet)}


def _run_orbit(args):
    ctx = OperatorContext(parse_expr(args.g0))
    f = parse_expr(args.f)
    entries = orbit(ctx, f, args.length, mode=args.mode, order=args.order)
    if args.mode == "exact":
        return {"mode": "exact", "orbit": [format_exppoly(e) for e in entries]}
    return {"mode": "taylor", "orbit": [_jet_json(e) for e in entries]}


def _run_classify(args):
    f = parse_expr(args.f)
    g0 = parse_expr(args.g0)
    radius = Fraction(args.search_radius)
    tol = None if args.tol is None else mpmath.mpf(2) ** (-args.tol)
    opts = ClassifyOptions(
        search_radius=radius, precision_bits=args.precision, tolerance=tol
    )
    return classify(f, g0, opts).to_json()


def _run_duhamel(args):
    v = parse_expr(args.v)
    w = parse_expr(args.w)
    try:
        return {"product": _exppoly_json(duhamel(v, w))}
    except UnsupportedClosedForm:
        series = duhamel(
            DividedSeries.from_exppoly(v, args.order),
            DividedSeries.from_exppoly(w, args.order),
        )
        return {"product": _series_json(series)}


def _run_omega(args):
    f = parse_expr(args.f)
    x = parse_expr(args.x)
    z = _parse_rational_scalar(args.z, "z")
    value = omega(f, x, z, args.precision)
    return {"value": _scalar_json(value)}


def _run_pair(args):
    from .duality import pair

    x = _parse_poly(args.x, "x")
    h = parse_expr(args.h)
    return {"value": _scalar_json(pair(x, h))}


def _run_identities(args):
    report = run_suite(
        args.suite, trials=args.trials, seed=args.seed, precision=args.precision
    )
    return report.to_json()


def _run_invariance(args):
    g0 = parse_expr(args.g0)
    matrix = invariant_line_matrix(g0, args.n)
    doc = {
        "n": args.n,
        "matrix": [[str(c) for c in row] for row in matrix],
        "nilpotency_index": nilpotency_index(matrix),
    }
    if args.f is not None:
        report = orbit_rank(g0, parse_expr(args.f))
        doc["orbit_rank"] = report.rank
        doc["hull_index"] = report.hull_index
    return doc


_DISPATCH = {
    "apply": _run_apply,
    "orbit": _run_orbit,
    "classify": _run_classify,
    "duhamel": _run_duhamel,
    "omega": _run_omega,
    "pair": _run_pair,
    "identities": _run_identities,
    "invariance": _run_invariance,
}


def run(argv=None, stdout=None, stderr=None):
    """Parse argv, execute, print one JSON document; return the exit code."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        doc = _DISPATCH[args.verb](args)
    except USAGE_ERRORS as exc:
        json.dump({"error": {"kind": exc.kind, "message": str(exc)}}, stdout, indent=2)
        stdout.write("\n")
        print(f"usage error: {exc}", file=stderr)
        return 2
    except PommiezError as exc:
        json.dump({"error": {"kind": exc.kind, "message": str(exc)}}, stdout, indent=2)
        stdout.write("\n")
        print(f"error: {exc}", file=stderr)
        return 1
    json.dump(doc, stdout, indent=2)
    stdout.write("\n")
    return 0


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
