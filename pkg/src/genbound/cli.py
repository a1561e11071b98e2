"""Command-line front end.

    genbound sweep        Gaussian mean-estimation bound curves (CSV or JSON)
    genbound certify      exact-vs-bound certification on random toy problems
    genbound audit        Pinsker / Jensen-Shannon inequality chain on random joints
    genbound psi-inverse  evaluate inf_lam (x + psi(lam)) / lam

Exit codes: 0 ok, 2 usage error, 3 quadrature did not converge somewhere,
4 a bound or inequality was violated (or an envelope failed its checks).
GENBOUND_THREADS caps the number of worker threads used by ``sweep``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import cgf_bounds as cb
from . import discrete_oracle as do
from . import gaussian_example as ge
from .info_measures import LOG2, QuadratureSpec

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_VIOLATION = 0, 2, 3, 4


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GENBOUND_THREADS", "1")))
    except ValueError:
        return 1


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return ""
    return f"{float(x):.9g}"


def _rows_out(rows: list[dict], fields: list[str], fmt: str) -> str:
    if fmt == "json":
        clean = [{k: (r[k] if isinstance(r[k], (bool, type(None))) else float(_fmt(r[k]))) for k in fields}
                 for r in rows]
        return json.dumps(clean, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(r[k]) for k in fields])
    return buf.getvalue()


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", "-o", default="-", help="output file, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--bits", action="store_true", help="report information values in bits")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genbound", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="Gaussian example bound curves")
    s.add_argument("--sigma2", type=float, default=1.0)
    s.add_argument("--c", type=float, default=None, help="loss truncation (default sigma/4)")
    s.add_argument("--mean", type=float, default=1.0)
    s.add_argument("--t-min", type=float, default=0.01)
    s.add_argument("--t-max", type=float, default=0.5)
    s.add_argument("--t-steps", type=int, default=50)
    s.add_argument("--mc-samples", type=int, default=10**6)
    s.add_argument("--quad-points", type=int, default=401)
    _add_common(s)

    c = sub.add_parser("certify", help="certify bounds on enumerable toy problems")
    c.add_argument("--problems", type=int, default=1000)
    c.add_argument("--problem-file", default=None, help="JSON toy problem to certify instead")
    c.add_argument("--dump", default="certify_violations.json", help="where violating problems are written")
    _add_common(c)

    a = sub.add_parser("audit", help="inequality audit on random discrete joints")
    a.add_argument("--trials", type=int, default=1000)
    a.add_argument("--max-alphabet", type=int, default=8)
    _add_common(a)

    q = sub.add_parser("psi-inverse", help="generalized inverse of a CGF envelope")
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--sigma", type=float, help="subgaussian envelope lam^2 sigma^2 / 2")
    src.add_argument("--psi-table", help="CSV of lambda,psi samples starting at lambda = 0")
    q.add_argument("--x", type=float, required=True)
    return parser


def cmd_sweep(args, parser) -> int:
    if args.t_steps < 1:
        parser.error("--t-steps must be >= 1")
    if args.sigma2 <= 0:
        parser.error("--sigma2 must be positive")
    if not 0 < args.t_min <= args.t_max <= 0.5:
        parser.error("need 0 < --t-min <= --t-max <= 0.5")
    if args.t_steps > 1 and args.t_min == args.t_max:
        parser.error("--t-min == --t-max needs --t-steps 1")
    c = args.c if args.c is not None else math.sqrt(args.sigma2) / 4.0
    if c <= 0:
        parser.error("--c must be positive")
    if args.mc_samples < ge.MIN_MC_SAMPLES:
        parser.error(f"--mc-samples must be >= {ge.MIN_MC_SAMPLES}")
    try:
        quad = QuadratureSpec(points_per_axis=args.quad_points)
    except ValueError as e:
        parser.error(f"--quad-points: {e}")
    t_values = np.linspace(args.t_min, args.t_max, args.t_steps) if args.t_steps > 1 else [args.t_min]
    spec = ge.SweepSpec(tuple(t_values), args.mc_samples, quad, args.seed)
    cfg = ge.ExampleConfig(t=float(t_values[0]), sigma2=args.sigma2, mean=args.mean, c=c)
    points = ge.sweep(spec, cfg, max_workers=_threads())
    text = ge.to_json(points, args.bits) if args.format == "json" else ge.to_csv(points, args.bits)
    _write(text, args.output)
    if not all(p.converged for p in points):
        print("warning: quadrature did not converge for some t values", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


CERTIFY_FIELDS = ["index", "gen", "mi_example1", "lautum_example2", "js_corollary1", "theorem2_product",
                  "theorem2_joint", "theorem2_mixture", "theorem1_upper_mixture", "theorem1_lower_mixture",
                  "prop1_cap", "ok"]


def cmd_certify(args, parser) -> int:
    if args.problems < 1:
        parser.error("--problems must be >= 1")
    if args.problem_file:
        try:
            with open(args.problem_file) as fh:
                problem = do.ToyLearningProblem.from_json(fh.read())
        except (OSError, ValueError, TypeError) as e:
            print(f"genbound certify: bad problem file: {e}", file=sys.stderr)
            return EXIT_USAGE
        reports = [do.certify_bounds(problem)]
    else:
        reports = do.certification_suite(args.problems, args.seed)

    rows = []
    for i, r in enumerate(reports):
        row = {"index": i, "gen": r.gen, "ok": r.ok}
        row.update({k: v.value for k, v in r.bounds.items()})
        rows.append(row)
    if args.format == "json" and args.problem_file:
        d = reports[0].as_dict()
        d["ok"] = reports[0].ok
        text = json.dumps(d, indent=1, default=float) + "\n"
    else:
        text = _rows_out(rows, CERTIFY_FIELDS, args.format)
    _write(text, args.output)

    bad = [r for r in reports if not r.ok]
    if bad:
        with open(args.dump, "w") as fh:
            json.dump([r.as_dict(include_problem=True) for r in bad], fh, indent=1, default=float)
        print(f"{len(bad)} bound violation(s); problems dumped to {args.dump}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


AUDIT_FIELDS = ["index", "rows", "cols", "mi", "js", "tv", "pinsker", "js_tv", "js_mi", "dominance", "ok"]


def cmd_audit(args, parser) -> int:
    if args.trials < 1:
        parser.error("--trials must be >= 1")
    if args.max_alphabet < 1:
        parser.error("--max-alphabet must be >= 1")
    scale = 1.0 / LOG2 if args.bits else 1.0
    results = do.audit_suite(args.trials, args.max_alphabet, args.seed)
    rows = [
        {"index": i, "rows": r.shape[0], "cols": r.shape[1], "mi": r.mi * scale, "js": r.js * scale,
         "tv": r.tv, "pinsker": r.pinsker, "js_tv": r.js_tv, "js_mi": r.js_mi, "dominance": r.dominance,
         "ok": r.ok}
        for i, r in enumerate(results)
    ]
    _write(_rows_out(rows, AUDIT_FIELDS, args.format), args.output)
    failures = sum(not r.ok for r in results)
    if failures:
        print(f"{failures} joint(s) violated the inequality chain", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_psi_inverse(args, parser) -> int:
    if not (args.x >= 0):
        parser.error("--x must be non-negative")
    try:
        if args.psi_table:
            env = cb.TabulatedEnvelope.from_csv(args.psi_table)
        else:
            if not args.sigma > 0:
                parser.error("--sigma must be positive")
            env = cb.SubgaussianEnvelope(args.sigma)
    except cb.EnvelopeError as e:
        print(f"genbound psi-inverse: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except (OSError, ValueError) as e:
        print(f"genbound psi-inverse: bad table: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        value = cb.psi_star_inverse(env, args.x)
    except cb.EnvelopeError as e:
        print(f"genbound psi-inverse: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    print(f"{value:.12g}")
    return EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "certify": cmd_certify,
    "audit": cmd_audit,
    "psi-inverse": cmd_psi_inverse,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
