"""``qsearch`` command line: run, sweep, verify, report.

Exit codes: 0 success, 1 failed self-check or I/O error, 2 invalid input,
3 refusal (a variant with no known algorithm, or a size guard).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from ..engine import analytic_success, iteration_count, subspace_vectors, sweep_success
from ..errors import ArgumentError, NoCouplingError, RefusalError, ValidationError
from ..problems import Nearby, build_spec, solve, solve_nearby_at_most
from ..verify import flipped_sign_step, run_checks, summary
from .config import (
    PROBLEMS,
    ExperimentConfig,
    build_instance,
    default_output_dir,
    make_config,
    read_config_file,
)
from .report import append_summary, load_records, record_path, sweep_csv, write_record, write_report

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_REFUSED = 0, 1, 2, 3

# (flag, help) pairs shared by run and sweep; all values are parsed later so a
# config file can supply them too.
PROBLEM_FLAGS = [
    ("--n", "number of qubits"),
    ("--k", "Hamming distance / rotation parameter"),
    ("--source", "source index (nearby: the known word r)"),
    ("--target", "target index (multidim: comma-separated coordinates)"),
    ("--sources", "comma-separated source indices"),
    ("--targets", "comma-separated target indices (twodim-multi: x/y pairs)"),
    ("--nx", "qubits in the x register"),
    ("--ny", "qubits in the y register"),
    ("--g", "comma-separated x values where the helper is non-zero"),
    ("--t1", "target x"),
    ("--t2", "target y"),
    ("--d", "number of axes"),
    ("--q", "qubits per axis"),
    ("--levels", "helper levels, ';' between levels, ',' between joint indices"),
    ("--u", "unitary for symmetric/composite: walsh, rotation or random"),
    ("--u-length", "primitive count for --u random"),
    ("--seed", "seed for randomized instances"),
]


def _problem_parser() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("problem", nargs="?", choices=PROBLEMS, help="problem variant")
    parent.add_argument("--config", help="flat key = value file; flags override it")
    parent.add_argument("--output", help="output directory (default $QSEARCH_OUTPUT_DIR or ./results)")
    for flag, text in PROBLEM_FLAGS:
        parent.add_argument(flag, help=text)
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsearch", description="Amplitude amplification experiments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    problem = _problem_parser()

    run = sub.add_parser("run", parents=[problem], help="run one problem instance")
    run.add_argument("--at-most", action="store_true",
                     help="nearby: one run per distance k, k-1, ..., 1")
    run.add_argument("--timing", action="store_true",
                     help="record wall time (otherwise 0, keeping output byte-stable)")

    sweep = sub.add_parser("sweep", parents=[problem], help="success against iteration count")
    sweep.add_argument("--eta-range", help="a:b inclusive, or just b (default 0:2*eta_predicted)")

    verify = sub.add_parser("verify", help="run the invariant self-checks")
    verify.add_argument("--quick", action="store_true", help="fewer random trials")
    verify.add_argument("--inject-sign-error", action="store_true",
                        help="swap in a recurrence with a flipped sign; the recurrence check must fail")

    report = sub.add_parser("report", help="aggregate JSON records into report.csv/report.json")
    report.add_argument("--input", help="directory holding records (default: output directory)")
    report.add_argument("--output", help="directory for the report files")
    return parser


def _config(args, extra=()) -> ExperimentConfig:
    file_values = read_config_file(args.config) if args.config else {}
    flags = {flag[2:].replace("-", "_"): getattr(args, flag[2:].replace("-", "_"))
             for flag, _ in PROBLEM_FLAGS}
    flags["output"] = args.output
    for key in extra:
        value = getattr(args, key)
        flags[key] = value if value not in (False, None) else None
    return make_config(args.problem, file_values, flags)


def cmd_run(args) -> int:
    cfg = _config(args, extra=("at_most", "timing"))
    p = build_instance(cfg)
    if str(cfg.get("at_most", "")).lower() in {"1", "true", "yes", "on"}:
        if not isinstance(p, Nearby):
            raise ArgumentError("--at-most applies to the nearby problem only")
        records = solve_nearby_at_most(p.n, p.k, p.r, p.t)
    else:
        records = [solve(p)]
    out = Path(cfg.output_path)
    for rec in records:
        if not cfg.timing:
            rec = dataclasses.replace(rec, wall_time_ms=0)
        write_record(out, rec)
        append_summary(out, rec)
        print(json.dumps(rec.as_dict(), indent=2))
        logging.info("wrote %s", record_path(out, rec))
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config(args, extra=("eta_range",))
    spec, predicted = build_spec(build_instance(cfg))
    eta_pred = iteration_count(predicted).best_eta
    limit = 4 * max(eta_pred, 1)
    lo, hi = cfg.eta_sweep or (0, 2 * max(eta_pred, 1))
    if hi > limit:
        raise ArgumentError(f"eta range end {hi} exceeds 4 x eta_predicted = {limit}")
    _, _, u = subspace_vectors(spec)
    measured = sweep_success(spec, range(lo, hi + 1))
    rows = [(eta, float(measured[eta]), float(analytic_success(u, eta))) for eta in range(lo, hi + 1)]
    text = sweep_csv(rows)
    out = Path(cfg.output_path) / "sweeps"
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{cfg.problem}__eta{lo}-{hi}__seed{cfg.seed}.csv"
    path.write_text(text, encoding="utf-8", newline="")
    sys.stdout.write(text)
    logging.info("wrote %s", path)
    return EXIT_OK


def cmd_verify(args) -> int:
    step = flipped_sign_step if args.inject_sign_error else None
    kwargs = {"quick": args.quick}
    if step is not None:
        kwargs["step"] = step
    report = summary(run_checks(**kwargs))
    print(json.dumps(report, indent=2))
    for check in report["checks"]:
        if not check["passed"]:
            print(f"FAILED {check['module']}: {check['invariant']} ({check['detail']})", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_FAILED


def cmd_report(args) -> int:
    src = Path(args.input or args.output or default_output_dir())
    dst = Path(args.output or src)
    records = load_records(src)
    if not records:
        raise ArgumentError(f"no JSON records found under {src}")
    for path in write_report(records, dst):
        print(path)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "verify": cmd_verify, "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except RefusalError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (ValidationError, ArgumentError, NoCouplingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
