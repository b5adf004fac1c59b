"""Command-line front end.

Subcommands:
  norm    power-iteration operator norm of the uniform-weight operator
  verify  run the structural identity suites, JSON line per suite
  dpp     sample the induced determinantal point process + diagnostics
  table   CSV of branching vs Toeplitz norms over a (q, n) sweep

Exit codes: 0 success, 1 malformed input, 2 norm non-convergence,
3 verification failure, 4 kernel rejection, 5 size cap exceeded.
Outputs depend only on the arguments and the seed, so reruns are
byte-identical; files are written in one shot after all computation
succeeds, never partially.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dpp as dpp_mod
from . import verify as verify_mod
from .operators import BranchingOperator, dense_cap, toeplitz_dense
from .spectral import operator_norm
from .symbols import Symbol
from .tree import TreeShape

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_CONVERGENCE = 2
EXIT_VERIFY_FAILED = 3
EXIT_KERNEL_REJECTED = 4
EXIT_CAP_EXCEEDED = 5


def _fail(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _load_symbol(args) -> Symbol:
    if getattr(args, "symbol", None) and getattr(args, "symbol_file", None):
        raise ValueError("give either --symbol or --symbol-file, not both")
    if getattr(args, "symbol", None):
        return Symbol.from_json(args.symbol)
    if getattr(args, "symbol_file", None):
        return Symbol.from_json(Path(args.symbol_file).read_text())
    raise ValueError("a symbol is required (--symbol or --symbol-file)")


def _write_out(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _add_symbol_args(p):
    p.add_argument("--symbol", help='inline symbol JSON {"coeffs": [[k, re, im], ...]}')
    p.add_argument("--symbol-file", help="path to a symbol JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="btoep",
        description="Branching-Toeplitz operators on rooted homogeneous trees",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("norm", help="matrix-free operator norm")
    _add_symbol_args(p_norm)
    p_norm.add_argument("--q", type=int, required=True)
    p_norm.add_argument("--n", type=int, required=True)
    p_norm.add_argument("--tol", type=float, default=1e-10)
    p_norm.add_argument("--max-iter", type=int, default=10000)
    p_norm.add_argument("--seed", type=int, default=0x5EED)
    p_norm.add_argument("--format", choices=["json", "csv"], default="json")
    p_norm.add_argument("--out")

    p_verify = sub.add_parser("verify", help="run the identity suites")
    p_verify.add_argument("--case", choices=["A1", "A2", "A3"])
    p_verify.add_argument("--trials", type=int, default=20)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--fuzz-entry", action="store_true",
                          help="inject a perturbation (negative control)")
    p_verify.add_argument("--out")

    p_dpp = sub.add_parser("dpp", help="sample the determinantal point process")
    _add_symbol_args(p_dpp)
    p_dpp.add_argument("--q", type=int, required=True)
    p_dpp.add_argument("--n", type=int, required=True)
    p_dpp.add_argument("--samples", type=int, default=10000)
    p_dpp.add_argument("--seed", type=int, default=0)
    p_dpp.add_argument("--out", default="dpp", help="output prefix for .samples.jsonl / .diagnostics.csv")

    p_table = sub.add_parser("table", help="norm comparison table over (q, n)")
    _add_symbol_args(p_table)
    p_table.add_argument("--q-max", type=int, default=4)
    p_table.add_argument("--n-max", type=int, default=4)
    p_table.add_argument("--format", choices=["json", "csv"], default="csv")
    p_table.add_argument("--out")

    return parser


def cmd_norm(args) -> int:
    try:
        f = _load_symbol(args)
        if args.q < 1 or args.n < 0 or args.tol <= 0 or args.max_iter < 1:
            raise ValueError("invalid numeric parameters")
        op = BranchingOperator.uniform(args.q, args.n, f)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    report = operator_norm(op, tol=args.tol, max_iter=args.max_iter, seed=args.seed)
    if args.format == "csv":
        text = (
            "norm,method,iterations,residual\n"
            f"{report.norm_estimate!r},{report.method.value},"
            f"{report.iterations},{report.residual!r}"
        )
    else:
        text = report.to_json()
    print(text)
    _write_out(args.out, text + "\n")
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def cmd_verify(args) -> int:
    if args.trials < 1:
        return _fail("--trials must be >= 1", EXIT_INPUT)
    if args.case:
        results = [
            verify_mod.run_case_equalities(
                args.case, seed=args.seed, trials=args.trials, fuzz=args.fuzz_entry
            )
        ]
    else:
        results = verify_mod.run_all(seed=args.seed, trials=args.trials, fuzz=args.fuzz_entry)
    lines = [json.dumps(r.to_dict()) for r in results]
    text = "\n".join(lines) + "\n"
    print(text, end="")
    _write_out(args.out, text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def cmd_dpp(args) -> int:
    try:
        f = _load_symbol(args)
        if args.q < 1 or args.n < 0 or args.samples < 1000:
            raise ValueError("invalid numeric parameters (need samples >= 1000)")
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    try:
        kernel = dpp_mod.build_kernel(f, args.q, args.n)
    except ValueError as exc:
        return _fail(str(exc), EXIT_KERNEL_REJECTED)
    samples = dpp_mod.sample_many(kernel, args.samples, args.seed)
    report = dpp_mod.sssp_diagnostics(kernel, args.samples, args.seed)
    Path(args.out + ".samples.jsonl").write_text(dpp_mod.samples_to_jsonl(samples))
    Path(args.out + ".diagnostics.csv").write_text(report.to_csv())
    print(f"wrote {args.out}.samples.jsonl and {args.out}.diagnostics.csv")
    return EXIT_OK


def cmd_table(args) -> int:
    try:
        f = _load_symbol(args)
        if args.q_max < 1 or args.n_max < 0:
            raise ValueError("invalid numeric parameters")
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    cap = dense_cap()
    for q in range(1, args.q_max + 1):
        if TreeShape(q, args.n_max).vertex_count > cap:
            return _fail(
                f"(q={q}, n={args.n_max}) needs {TreeShape(q, args.n_max).vertex_count} "
                f"rows, over the dense cap {cap}",
                EXIT_CAP_EXCEEDED,
            )
    cells = []
    for q in range(1, args.q_max + 1):
        for n in range(1, args.n_max + 1):
            bn = float(np.linalg.norm(BranchingOperator.uniform(q, n, f).materialize(), 2))
            tn = float(np.linalg.norm(toeplitz_dense(f, n), 2))
            cells.append((q, n, bn, tn, bn - tn))
    columns = ["q", "n", "branching_norm", "toeplitz_norm", "gap"]
    if args.format == "json":
        text = json.dumps({"columns": columns, "rows": [list(c) for c in cells]}) + "\n"
    else:
        rows = [",".join(columns)]
        rows += [f"{q},{n},{bn!r},{tn!r},{gap!r}" for q, n, bn, tn, gap in cells]
        text = "\n".join(rows) + "\n"
    print(text, end="")
    _write_out(args.out, text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "norm": cmd_norm,
        "verify": cmd_verify,
        "dpp": cmd_dpp,
        "table": cmd_table,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
