"""Command-line front end.

Tables go to stdout as CSV (9 significant digits) unless ``--out`` or
``--json`` say otherwise. Verification commands exit nonzero when any
checked inequality fails, after listing the failing rows on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import bounds, classical, coding, quantum
from .inputs import InputError, parse_inputs
from .report import DEFAULT_TOL, check, fmt, reports_to_csv, reports_to_json
from .sweep import QUANTITIES, SweepSpec, run_sweep

REMARK1_PROBS = (0.5, 0.3, 0.2)
REMARK1_VALUES = {1.0: 0.272669, 1.5: 0.225793}
REMARK1_TOL = 1e-5


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("DIVBOUND_SEED", "0"))


def _rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(rows[0].keys())
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row.values()])
    return buf.getvalue()


def _json_default(rows):
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return fmt(v)
        return v

    return json.dumps([{k: clean(v) for k, v in r.items()} for r in rows], indent=2)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_reports(args, reports) -> int:
    _emit(args, reports_to_json(reports) + "\n" if args.json else reports_to_csv(reports))
    failing = [r for r in reports if not r.holds]
    if failing:
        sys.stderr.write("failing checks:\n" + reports_to_csv(failing))
        return 1
    return 0


def _emit_rows(args, rows) -> None:
    _emit(args, _json_default(rows) + "\n" if args.json else _rows_to_csv(rows))


def _random_pair(rng: np.random.Generator, k: int):
    P = rng.dirichlet(np.ones(k))
    Q = rng.dirichlet(np.ones(k))
    return classical.Distribution(P / P.sum()), classical.Distribution(Q / Q.sum())


# subcommands


def cmd_divergence(args) -> int:
    if args.measure in ("trace_distance", "fidelity", "chernoff", "relative_entropy", "jeffrey_quantum"):
        rho = parse_inputs(args.first, "density_matrix")
        sigma = parse_inputs(args.second, "density_matrix")
        func = {
            "trace_distance": quantum.trace_distance,
            "fidelity": quantum.fidelity,
            "chernoff": quantum.chernoff_information,
            "relative_entropy": quantum.quantum_relative_entropy,
            "jeffrey_quantum": quantum.quantum_jeffrey,
        }[args.measure]
        value = func(rho, sigma)
    else:
        P = parse_inputs(args.first, "distribution")
        Q = parse_inputs(args.second, "distribution")
        if args.measure == "tv":
            value = classical.total_variation(P, Q)
        else:
            func = {
                "tsallis": classical.tsallis_divergence,
                "jst": classical.jensen_shannon_tsallis,
                "jeffrey": classical.jeffrey_tsallis,
            }[args.measure]
            value = func(P, Q, args.q)
    _emit_rows(args, [{"measure": args.measure, "q": args.q, "value": value}])
    return 0


def cmd_verify_classical(args) -> int:
    if args.p and args.qdist:
        P = parse_inputs(args.p, "distribution")
        Q = parse_inputs(args.qdist, "distribution")
        reports = []
        for q in args.q:
            reports += bounds.verify_classical_bounds(P, Q, q, args.tol)
        return _emit_reports(args, reports)
    rng = np.random.default_rng(_seed(args))
    reports = []
    for i in range(args.trials):
        P, Q = _random_pair(rng, args.support)
        for q in args.q:
            for r in bounds.verify_classical_bounds(P, Q, q, args.tol):
                reports.append(r.__class__(**{**r.to_dict(), "name": f"{r.name}[trial={i},q={q:g}]"}))
    return _emit_reports(args, reports)


def cmd_verify_quantum(args) -> int:
    if args.rho and args.sigma:
        rho = parse_inputs(args.rho, "density_matrix")
        sigma = parse_inputs(args.sigma, "density_matrix")
        return _emit_reports(args, quantum.verify_quantum_bounds(rho, sigma, args.tol))
    seed = _seed(args)
    rank = args.rank or args.dim
    reports = []
    for i in range(args.trials):
        rho = quantum.random_density_matrix(args.dim, args.dim, seed=seed + 2 * i)
        sigma = quantum.random_density_matrix(args.dim, rank, seed=seed + 2 * i + 1)
        for r in quantum.verify_quantum_bounds(rho, sigma, args.tol):
            reports.append(r.__class__(**{**r.to_dict(), "name": f"{r.name}[trial={i}]"}))
    return _emit_reports(args, reports)


def _load_source_and_code(args):
    source = parse_inputs(args.source, "source")
    if args.code:
        code = parse_inputs(args.code, "code")
    elif args.construct == "huffman":
        code = coding.huffman_lengths(source)
    else:
        code = coding.shannon_fano_lengths(source, args.d)
    return source, code


def cmd_verify_coding(args) -> int:
    source, code = _load_source_and_code(args)
    variant = coding.BoundVariant(args.variant)
    reports = []
    for q in args.q:
        try:
            reports += coding.verify_coding_bounds(source, code, q, variant, args.tol)
        except coding.HypothesisError as exc:
            sys.stderr.write(f"skipped q={q:g}: {exc}\n")
    if coding.kraft_sum_exact(code) == 1:
        reports += coding.prop3_check(source, code, [q for q in args.q if q >= 1], args.tol)
    return _emit_reports(args, reports)


def cmd_coding(args) -> int:
    source, code = _load_source_and_code(args)
    rows = coding.coding_table(source, code, args.q, coding.BoundVariant(args.variant))
    _emit_rows(args, rows)
    return 0


def cmd_sweep(args) -> int:
    spec = SweepSpec(tuple(args.eps), tuple(args.q), args.quantity, args.oracle, args.support, args.grid)
    _emit_rows(args, run_sweep(spec))
    return 0


def cmd_counterexample(args) -> int:
    found = bounds.counterexample_search(args.q, args.trials, _seed(args))
    if found is None:
        _emit_rows(args, [{"q": args.q, "found": "false"}])
        return 1
    P, Q, gap = found
    _emit_rows(args, [{
        "q": args.q,
        "found": "true",
        "P": json.dumps(P.probs.tolist()),
        "Q": json.dumps(Q.probs.tolist()),
        "gap": gap,
    }])
    return 0


def remark1_reports(tol: float = REMARK1_TOL):
    """Rebuild the three-symbol Shannon-Fano example and compare against the published numbers."""
    source = coding.Source(REMARK1_PROBS)
    code = coding.shannon_fano_lengths(source, 2)
    reports = [
        check("shannon_fano_lengths_eq_123", 0.0, float(np.abs(np.subtract(code.lengths, (1, 2, 3))).sum()), 0.0),
        check("kraft_sum_eq_7_8", 0.0, float(abs(coding.kraft_sum_exact(code) - Fraction(7, 8))), 0.0),
    ]
    for q, expected in REMARK1_VALUES.items():
        bound = coding.redundancy_bound(source, code, q)
        reports.append(check(f"bound_q={q:g}_matches_{expected}", tol, abs(bound - expected), 0.0))
        reports.append(check(f"bound_q={q:g}_covers_tv", bound, 0.5 * coding.l1_deviation(source, code), tol))
    return reports


def cmd_remark1(args) -> int:
    return _emit_reports(args, remark1_reports())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="report tolerance")
    common.add_argument("--seed", type=int, default=None, help="random seed (default: $DIVBOUND_SEED or 0)")

    parser = argparse.ArgumentParser(prog="divbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("divergence", parents=[common], help="compute one divergence")
    p.add_argument("measure", choices=["tv", "tsallis", "jst", "jeffrey", "trace_distance", "fidelity",
                                       "chernoff", "relative_entropy", "jeffrey_quantum"])
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--q", type=float, default=1.0)
    p.set_defaults(func=cmd_divergence)

    verify = sub.add_parser("verify", help="check inequalities and emit reports")
    vsub = verify.add_subparsers(dest="suite", required=True)

    v = vsub.add_parser("classical", parents=[common])
    v.add_argument("--p", help="distribution file for P")
    v.add_argument("--qdist", help="distribution file for Q")
    v.add_argument("--q", type=_floats, default=[1.0], help="comma-separated q values")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--support", type=int, default=3)
    v.set_defaults(func=cmd_verify_classical)

    v = vsub.add_parser("quantum", parents=[common])
    v.add_argument("--rho")
    v.add_argument("--sigma")
    v.add_argument("--dim", type=int, default=2)
    v.add_argument("--rank", type=int, default=None, help="rank of sigma (default: full)")
    v.add_argument("--trials", type=int, default=100)
    v.set_defaults(func=cmd_verify_quantum)

    for name, func in (("coding", cmd_verify_coding),):
        v = vsub.add_parser(name, parents=[common])
        _coding_args(v)
        v.set_defaults(func=func)

    p = sub.add_parser("coding", parents=[common], help="tabulate redundancy quantities over q")
    _coding_args(p)
    p.set_defaults(func=cmd_coding)

    p = sub.add_parser("sweep", parents=[common], help="tabulate closed-form minima")
    p.add_argument("--quantity", choices=QUANTITIES, required=True)
    p.add_argument("--eps", type=_floats, required=True)
    p.add_argument("--q", type=_floats, default=[1.0])
    p.add_argument("--oracle", action="store_true", help="add the brute-force minimum")
    p.add_argument("--support", type=int, default=2)
    p.add_argument("--grid", type=int, default=2000)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("counterexample", parents=[common], help="search q-Pinsker violations for q < 1")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--trials", type=int, default=100000)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("remark1", parents=[common], help="reproduce the three-symbol coding example")
    p.set_defaults(func=cmd_remark1)
    return parser


def _coding_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--source", required=True, help="source file (CSV symbol,probability or JSON)")
    p.add_argument("--code", help="code file (JSON {d, lengths}); default: construct one")
    p.add_argument("--construct", choices=["shannon-fano", "huffman"], default="shannon-fano")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--q", type=_floats, default=[1.0, 1.5, 2.0], help="comma-separated q values")
    p.add_argument("--variant", choices=[v.value for v in coding.BoundVariant], default="THEOREM1")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
