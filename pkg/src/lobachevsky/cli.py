"""Command-line front end: figures, parallelism tables, verification suites, duality reports."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import figures, suites, trig
from .minkowski import Isometry
from .parallels import angle_of_parallelism, secant_boundary_oracle
from .projection import KINDS
from .suites import perpendicular_setup

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _positive(text):
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _nonnegative(text):
    v = float(text)
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text}")
    return v


def _common(p, tol_default=None):
    p.add_argument("--curvature", type=_positive, default=1.0, metavar="r",
                   help="curvature radius r (Gaussian curvature -1/r^2)")
    p.add_argument("--seed", type=int, default=0)
    # --tol 0 is accepted so a forced failure can exercise the exit path
    p.add_argument("--tol", type=_nonnegative, default=tol_default)
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="lobachevsky", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("figure", help="render a figure construction as SVG")
    p.add_argument("name", choices=figures.FIGURES)
    p.add_argument("--projection", choices=KINDS, default="poincare")
    _common(p)

    p = sub.add_parser("table", help="angle of parallelism: closed form vs bisection oracle, as CSV")
    p.add_argument("--d-min", type=float, default=0.01)
    p.add_argument("--d-max", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=20)
    _common(p, tol_default=suites.ORACLE_TOL)

    p = sub.add_parser("verify", help="run a verification suite and print a JSON report")
    p.add_argument("suite", choices=suites.SUITES)
    _common(p)

    p = sub.add_parser("duality", help="spherical/hyperbolic substitution and accordance report")
    p.add_argument("-n", type=int, default=500, help="number of synthesized triangles")
    _common(p, tol_default=1e-9)
    return parser


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def table_rows(d_min, d_max, steps, r=1.0, tol=suites.ORACLE_TOL):
    if not (0 < d_min < d_max) or steps < 2:
        raise ValueError("need 0 < d_min < d_max and steps >= 2")
    ident = Isometry(np.eye(3))
    rows = []
    for d in np.logspace(math.log10(d_min), math.log10(d_max), steps):
        l, P = perpendicular_setup(d, r, ident)
        exact = angle_of_parallelism(d, r)
        oracle = secant_boundary_oracle(P, l, tol)
        rows.append((float(d), exact, oracle, abs(exact - oracle)))
    return rows


def table_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d", "pi_analytic", "pi_oracle", "abs_diff"])
    for row in rows:
        w.writerow([f"{v:.12g}" for v in row])
    return buf.getvalue()


def duality_report(n, r, seed, tol):
    rng = np.random.default_rng(seed)
    a, b = rng.uniform(0.1, 2.0, size=2)
    t = trig.measure_triangle(*trig.synthesize_right_triangle(a, b), 1.0)
    rows = trig.substitution_report(t.a, t.b, t.c, t.A, t.B)
    acc = trig.accordance_check(n, r, seed)
    p, _ = trig.euclidean_limit_exponent()
    ok = max(row["residual"] for row in rows) < 1e-12 and acc["max_residual"] < tol and 1.9 <= p <= 2.1
    return {
        "triangle": {"a": t.a, "b": t.b, "c": t.c, "A": t.A, "B": t.B},
        "substitution": rows,
        "accordance": acc,
        "euclidean_limit_exponent": p,
        "tolerance": tol,
        "pass": ok,
    }


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    r = args.curvature
    try:
        if args.command == "figure":
            out = args.out or f"{args.name}.svg"
            figures.figure(args.name, out, r, args.projection)
            return EXIT_PASS
        if args.command == "table":
            try:
                rows = table_rows(args.d_min, args.d_max, args.steps, r, args.tol)
            except ValueError as exc:
                parser.error(str(exc))
            _emit(table_csv(rows), args.out)
            return EXIT_PASS
        if args.command == "verify":
            report = suites.run_suite(args.suite, args.seed, r, args.tol)
            _emit(suites.report_json(report), args.out)
            return EXIT_PASS if report["all_pass"] else EXIT_FAIL
        if args.command == "duality":
            if args.n < 1:
                parser.error("-n must be >= 1")
            report = duality_report(args.n, r, args.seed, args.tol)
            _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
            return EXIT_PASS if report["pass"] else EXIT_FAIL
    except figures.FigureValidationError as exc:
        print(f"figure validation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
