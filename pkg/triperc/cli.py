"""
Command-line driver for triperc.

Data (CSV tables, formula values) goes to stdout or to --out files; status
lines go to stderr. Campaign commands append a RunRecord to the records file.
"""

import argparse
import csv
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from triperc import __version__, cft
from triperc.analysis import csv_text, fit_n_log, prefactor_report, write_csv, write_summary
from triperc.config import B_EVENT_MODES, LABEL_METHODS, Settings, load_settings
from triperc.errors import ArgumentError, RangeError, TripercError
from triperc.estimators import (
    DEFAULT_EPS_GRID,
    build_grid,
    estimate_arm,
    estimate_crossing_events,
    estimate_leading_constant,
    estimate_segment_expectation,
    estimate_window_grid,
    make_partition,
)
from triperc.lattice import DomainKind, DomainSpec, default_truncation
from triperc.percolation.arms import ARM_KINDS
from triperc.records import RunRecord, append_record, load_records, merge_records
from triperc.verify import SUITES, enumeration_checks, run_suite

logger = logging.getLogger(__name__)

# Each op maps (argument, lambda_cap) to a FormulaValue or a plain float.
LAMBDA_OPS = {
    "cardy": lambda x, cap: cft.cardy(x, x_max=cap),
    "watts": lambda x, cap: cft.watts(x, x_max=cap),
    "clusters": lambda x, cap: cft.expected_crossing_clusters(x, x_max=cap),
    "excess": lambda x, cap: cft.crossing_cluster_excess(x, x_max=cap),
    "hyp3f2": lambda x, cap: cft.hyp3f2_special(x, x_max=cap),
}
EPS_OPS = {
    "wprime": lambda e, cap: cft.halfplane_wprime_limit(e, x_max=cap),
    "wprime-linear": lambda e, cap: cft.wprime_linearization(e),
    "cut-prediction": lambda e, cap: cft.cut_plane_prediction(e, x_max=cap),
    "cut-linear": lambda e, cap: cft.cut_plane_linearization(e),
    "cut-lambda": lambda e, cap: cft.cut_plane_lambda(e),
    "halfplane-lambda": lambda e, cap: cft.halfplane_lambda(e),
}


def print_welcome():
    """Print welcome message with usage information."""
    print("🎲 triperc - critical site percolation on the triangular lattice")
    print("=" * 60)
    print()
    print("📋 COMMANDS:")
    print("  simulate   E(n): expected number of clusters meeting [1, n]")
    print("  windows    E[T(i)]/eps window grid, f0 and L(n) (cut-plane bound on the full plane)")
    print("  crossing   crossing events between (-inf, 1] and [k, k(1+eps)]")
    print("  arm        one-arm and three-arm probabilities of half-plane annuli")
    print("  formula    Cardy, Watts and crossing-cluster formulas on a grid")
    print("  fit        weighted fit of E(n) = A n + B log n + C")
    print("  report     merge run records and tabulate the log-prefactors")
    print("  verify     formula, enumeration and per-sample identity checks")
    print()
    print("💡 EXAMPLES:")
    print("  triperc formula --op cardy --lambda 0.5")
    print("  triperc windows --domain half --n 4096 --eps 1.0 --trials 100000 --seed 7")
    print("  triperc verify --suite enumeration")
    print("=" * 60)


def _status(message: str) -> None:
    print(message, file=sys.stderr)


def _campaign_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("campaign options")
    group.add_argument("--seed", type=int, help="Master seed (default 0)")
    group.add_argument("--trials", type=int, help="Number of trials (default 1000)")
    group.add_argument("--first-trial", type=int, dest="first_trial",
                       help="Index of the first trial, for sharded campaigns")
    group.add_argument("--truncation", type=int, help="Box extent Lambda (default max(4n, 256))")
    group.add_argument("--workers", type=int, help="Worker processes (env TRIPERC_WORKERS)")
    group.add_argument("--chunk-size", type=int, dest="chunk_size", help="Trials per work unit")
    group.add_argument("--label-method", choices=LABEL_METHODS, dest="label_method")
    group.add_argument("--records", help="Run record file (JSON lines)")
    group.add_argument("--out", help="Write the CSV table here instead of stdout")
    group.add_argument("--no-progress", action="store_true", help="Hide progress bars")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triperc",
        description="Critical site percolation on the triangular lattice: cluster counts, "
                    "crossing events and exact crossing formulas",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  triperc simulate --domain half --n 64 128 256 512 --trials 20000
  triperc windows --domain full --n 1024 --eps 1.0 0.5 0.25 --trials 5000 --workers 8
  triperc formula --op watts --lambda 0.1 0.2 0.5
  triperc report --out-dir results
        """,
    )
    parser.add_argument("--version", action="version", version=f"triperc {__version__}")
    parser.add_argument("--config", help="Config file (key=value or JSON)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--lambda-cap", type=float, dest="lambda_cap",
                        help="Largest series argument (default 0.95)")
    sub = parser.add_subparsers(dest="command", metavar="command")
    campaign = _campaign_options()

    p = sub.add_parser("simulate", parents=[campaign], help="Estimate E(n)")
    p.add_argument("--domain", choices=("half", "full"), default="half")
    p.add_argument("--n", type=int, nargs="+", required=True, help="Segment lengths (common random numbers)")
    p.add_argument("--doubling", action="store_true", help="Also run at doubled truncation")
    p.add_argument("--leading", action="store_true", help="Also estimate P(1 -/- (-inf,0]) - 1/2")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("windows", parents=[campaign], help="Estimate the E[T(i)]/eps window grid")
    p.add_argument("--domain", choices=("half", "full"), default="half")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, nargs="+", default=list(DEFAULT_EPS_GRID))
    p.add_argument("--b-mode", choices=B_EVENT_MODES, dest="b_event_mode",
                   help="How the open vertices of B(i) may be used")
    p.add_argument("--doubling", action="store_true", help="Also run at doubled truncation")
    p.add_argument("--summary", help="Write L, f0 and violation counts as JSON here")
    p.set_defaults(handler=cmd_windows)

    p = sub.add_parser("crossing", parents=[campaign], help="Estimate half-plane crossing events")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, default=1.0)
    p.set_defaults(handler=cmd_crossing)

    p = sub.add_parser("arm", parents=[campaign], help="Estimate arm probabilities")
    p.add_argument("--m", type=int, required=True, help="Inner box size")
    p.add_argument("--n-outer", type=int, nargs="+", required=True, dest="n_outer", help="Outer box sizes")
    p.add_argument("--kind", choices=ARM_KINDS, default="one_arm")
    p.set_defaults(handler=cmd_arm)

    p = sub.add_parser("formula", help="Evaluate scaling-limit formulas")
    p.add_argument("--op", choices=sorted({**LAMBDA_OPS, **EPS_OPS}), required=True)
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--lambda", type=float, nargs="+", dest="lam", help="Cross-ratio values")
    where.add_argument("--eps", type=float, nargs="+", help="eps values")
    where.add_argument("--range", type=float, nargs=3, metavar=("START", "STOP", "COUNT"),
                       help="Evenly spaced arguments")
    p.add_argument("--out", help="Write the CSV table here instead of stdout")
    p.set_defaults(handler=cmd_formula)

    p = sub.add_parser("fit", help="Fit E(n) = A n + B log n + C")
    p.add_argument("--input", help="CSV with n, mean and stderr columns (default: simulate records)")
    p.add_argument("--domain", choices=("half", "full"), default="half")
    p.add_argument("--records", help="Run record file (JSON lines)")
    p.add_argument("--out", help="Write the CSV table here instead of stdout")
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("report", help="Merge run records and write the prefactor tables")
    p.add_argument("--records", help="Run record file (JSON lines)")
    p.add_argument("--out-dir", dest="out_dir", help="Directory for the CSV tables and summary.json")
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("verify", help="Run the self-check suites")
    p.add_argument("--suite", choices=("all", *SUITES), default="all")
    p.add_argument("--trials", type=int, help="Samples per Monte Carlo or identity check")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--full", action="store_true", help="Include the larger enumeration boxes")
    p.add_argument("--out", help="Write the CSV table here instead of stdout")
    p.set_defaults(handler=cmd_verify)
    return parser


def resolve_settings(args: argparse.Namespace) -> Settings:
    names = ("seed", "trials", "truncation", "lambda_cap", "workers", "chunk_size", "label_method",
             "b_event_mode", "records", "out_dir", "first_trial")
    overrides: Dict[str, Any] = {name: getattr(args, name, None) for name in names}
    if getattr(args, "no_progress", False):
        overrides["progress"] = False
    return load_settings(args.config, overrides)


def _emit(rows: List[Dict[str, Any]], out: Optional[str]) -> None:
    if out:
        path = write_csv(rows, out)
        _status(f"✓ Wrote {len(rows)} rows to {path}")
    else:
        sys.stdout.write(csv_text(rows))
        sys.stdout.flush()


def _record(settings: Settings, command: str, params: Dict[str, Any], accumulators) -> None:
    record = RunRecord(
        command=command,
        params={**params, "seed": settings.seed, "label_method": settings.label_method},
        accumulators=list(accumulators),
        shards=[[settings.first_trial, settings.first_trial + settings.trials]],
    )
    append_record(settings.records, record)
    _status(f"✓ Record {record.fingerprint[:12]} appended to {settings.records}")


def _report_row(report, **extra) -> Dict[str, Any]:
    return {
        **extra,
        "observable": report.observable,
        "mean": report.mean,
        "stderr": report.stderr,
        "trials": report.trials,
        "truncation": report.truncation,
        "doubled_delta": report.doubled_delta,
        "doubled_stderr": report.doubled_stderr,
    }


def cmd_simulate(args, settings: Settings) -> int:
    ns = sorted(set(args.n))
    truncation = settings.truncation or default_truncation(max(ns))
    _status(f"🔧 E(n) on the {args.domain} plane, n = {ns}, Lambda = {truncation}, {settings.trials} trials")
    reports = estimate_segment_expectation(
        ns, args.domain, settings.trials, settings.seed,
        truncation=truncation, doubling=args.doubling, settings=settings,
    )
    rows = [_report_row(r, domain=args.domain, n=n) for n, r in zip(ns, reports)]
    _record(settings, "simulate", {"domain": args.domain, "ns": ns, "truncation": truncation},
            [r.accumulator for r in reports])

    if args.leading:
        lead_truncation = settings.truncation or default_truncation(1)
        lead = estimate_leading_constant(args.domain, settings.trials, settings.seed,
                                         truncation=lead_truncation, doubling=args.doubling,
                                         settings=settings)
        rows.append(_report_row(lead, domain=args.domain, n=None))
        _record(settings, "leading", {"domain": args.domain, "truncation": lead_truncation},
                [lead.accumulator])
    _emit(rows, args.out)
    return 0


def _violation_line(violations: Dict[str, int]) -> str:
    bad = {k: v for k, v in violations.items() if v}
    return "no identity violations" if not bad else f"identity violations {bad}"


def cmd_windows(args, settings: Settings) -> int:
    truncation = settings.truncation or default_truncation(args.n)
    rows: List[Dict[str, Any]] = []
    summary: Dict[str, Any] = {}
    for eps in args.eps:
        _status(f"🔧 Windows on the {args.domain} plane, n = {args.n}, eps = {eps}, Lambda = {truncation}")
        grid = estimate_window_grid(args.n, eps, args.domain, settings.trials, settings.seed,
                                    truncation=truncation, doubling=args.doubling, settings=settings)
        rows.extend(grid.rows())
        _status(f"✓ eps = {eps}: L = {grid.L.mean:.5f} +/- {grid.L.stderr:.5f}, "
                f"f0 = {grid.f0.mean:.4f}, {_violation_line(grid.violations)}")
        entry = {"L": grid.L.to_dict(), "f0": grid.f0.to_dict(), "violations": grid.violations,
                 "partition": grid.partition.to_dict()}
        if grid.L_bound is not None:
            entry["L_bound"] = grid.L_bound.to_dict()
        summary[str(eps)] = entry
        params = {"domain": args.domain, "n": args.n, "eps": eps, "truncation": truncation}
        if grid.T_tilde is not None:
            params["b_event_mode"] = settings.b_event_mode
        _record(settings, "windows", params, grid.accumulators.values())
    if args.summary:
        path = write_summary(summary, args.summary)
        _status(f"✓ Wrote {path}")
    _emit(rows, args.out)
    return 0


def _prediction(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except RangeError as e:
        logger.info("No prediction: %s", e)
        return None


def cmd_crossing(args, settings: Settings) -> int:
    cap = settings.lambda_cap
    lam = cft.halfplane_lambda(args.eps).value
    domain_truncation = settings.truncation
    _status(f"🔧 Crossing events, k = {args.k}, eps = {args.eps}, lambda = {lam:.6f}")
    reports = estimate_crossing_events(args.k, args.eps, settings.trials, settings.seed,
                                       truncation=domain_truncation, settings=settings)
    predictions = {
        "open_crossing": _prediction(cft.cardy, lam, x_max=cap),
        "double_crossing": _prediction(cft.watts, lam, x_max=cap),
        "W_prime": _prediction(cft.halfplane_wprime_limit, args.eps, x_max=cap),
    }
    rows = []
    for name, report in reports.items():
        row = _report_row(report, k=args.k, eps=args.eps)
        value = predictions.get(name)
        row["prediction"] = value.value if value is not None else None
        row["prediction_error_bound"] = value.abs_error_bound if value is not None else None
        rows.append(row)
    truncation = next(iter(reports.values())).truncation
    _record(settings, "crossing", {"k": args.k, "eps": args.eps, "truncation": truncation},
            [r.accumulator for r in reports.values()])
    _emit(rows, args.out)
    return 0


def cmd_arm(args, settings: Settings) -> int:
    rows = []
    for n_outer in sorted(set(args.n_outer)):
        _status(f"🔧 {args.kind} ({args.m}, {n_outer})")
        report = estimate_arm(args.m, n_outer, args.kind, settings.trials, settings.seed, settings=settings)
        rows.append(_report_row(report, kind=args.kind, m=args.m, n_outer=n_outer))
        _record(settings, "arm", {"m": args.m, "n_outer": n_outer, "kind": args.kind}, [report.accumulator])
    _emit(rows, args.out)
    return 0


def cmd_formula(args, settings: Settings) -> int:
    if args.range is not None:
        start, stop, count = args.range
        if count < 1 or not float(count).is_integer():
            raise ArgumentError(f"COUNT must be a positive integer, got {count}")
        values = np.linspace(start, stop, int(count)).tolist()
    else:
        values = args.lam if args.lam is not None else args.eps

    if args.op in LAMBDA_OPS:
        if args.eps is not None:
            raise ArgumentError(f"{args.op} takes --lambda, not --eps")
        fn, column = LAMBDA_OPS[args.op], "lambda"
    else:
        if args.lam is not None:
            raise ArgumentError(f"{args.op} takes --eps, not --lambda")
        fn, column = EPS_OPS[args.op], "eps"

    rows = []
    for x in values:
        result = fn(x, settings.lambda_cap)
        if isinstance(result, cft.FormulaValue):
            value, bound = result.value, result.abs_error_bound
        else:
            value, bound = float(result), None
        rows.append({"op": args.op, column: x, "value": value, "abs_error_bound": bound})
    _emit(rows, args.out)
    return 0


def _read_points(path: str):
    points = []
    with open(path, "r", newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            if not row.get("n"):
                continue
            points.append((float(row["n"]), float(row["mean"]), float(row["stderr"])))
    return points


def _segment_points(records: Sequence[RunRecord], domain: str):
    points = []
    for record in records:
        if record.command != "simulate" or record.params.get("domain") != domain:
            continue
        acc = record.accumulator_map()
        for n in record.params["ns"]:
            a = acc[f"count[{n}]"]
            points.append((float(n), a.mean, a.stderr))
    return points


def _fit_rows(fit, domain: str) -> List[Dict[str, Any]]:
    data = fit.to_dict()
    data.pop("covariance")
    prefactor = cft.HALF_PLANE_PREFACTOR if domain == "half" else cft.FULL_PLANE_CONJECTURE
    return [{"domain": domain, **data, "B_target": prefactor}]


def cmd_fit(args, settings: Settings) -> int:
    if args.input:
        points = _read_points(args.input)
    else:
        points = _segment_points(merge_records(load_records(settings.records)), args.domain)
    fit = fit_n_log(points)
    _status(f"✓ A = {fit.A:.6f}, B = {fit.B:.6f} +/- {fit.stderrs[1]:.6f}, C = {fit.C:.6f}")
    _emit(_fit_rows(fit, args.domain), args.out)
    return 0


def cmd_report(args, settings: Settings) -> int:
    records = merge_records(load_records(settings.records))
    _status(f"🔧 {len(records)} merged records from {settings.records}")
    out_dir = Path(settings.out_dir)
    summary: Dict[str, Any] = {"records": len(records)}

    grids = []
    for record in records:
        if record.command != "windows":
            continue
        p = record.params
        domain = DomainSpec.of_kind(p["domain"], p["n"], p["truncation"])
        grids.append(build_grid(make_partition(p["n"], p["eps"]), domain, record.accumulator_map()))

    usable = []
    for kind in (DomainKind.HALF, DomainKind.FULL):
        mine = [g for g in grids if g.kind is kind]
        if len({g.eps for g in mine}) >= 2:
            usable.extend(mine)
        elif mine:
            _status(f"⚠️  {kind.value}-plane windows need at least 2 eps values; skipped")
    if usable:
        report = prefactor_report(usable)
        write_csv(report.rows, out_dir / "prefactor.csv")
        window_rows = [row for g in usable for row in g.rows()]
        write_csv(window_rows, out_dir / "windows.csv")
        summary["prefactor"] = report.summary

    fits = []
    for domain in ("half", "full"):
        points = _segment_points(records, domain)
        if len({n for n, _, _ in points}) >= 4:
            fit = fit_n_log(points)
            fits.extend(_fit_rows(fit, domain))
            summary[f"fit_{domain}"] = fit.to_dict()
    if fits:
        write_csv(fits, out_dir / "fit.csv")

    extras = []
    for record in records:
        if record.command in ("leading", "crossing", "arm"):
            for acc in record.accumulators:
                extras.append({"command": record.command, **record.params,
                               "observable": acc.observable, "mean": acc.mean,
                               "stderr": acc.stderr, "trials": acc.trials})
    if extras:
        write_csv(extras, out_dir / "observables.csv")

    path = write_summary(summary, out_dir / "summary.json")
    _status(f"✓ Wrote {path}")
    return 0


def cmd_verify(args, settings: Settings) -> int:
    settings_run = replace(settings, progress=False)
    kwargs = {"trials": args.trials} if args.trials is not None else {}
    results = []
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    for suite in suites:
        _status(f"🔧 Running {suite} checks...")
        if suite == "enumeration":
            found = enumeration_checks(seed=settings.seed, settings=settings_run, full=args.full, **kwargs)
        else:
            found = run_suite(suite, seed=settings.seed, settings=settings_run, **kwargs)
        for result in found:
            mark = "✓" if result.passed else "❌"
            _status(f"  {mark} {result.suite}/{result.name}: {result.detail}")
        results.extend(found)
    _emit([r.to_dict() for r in results], args.out)
    failed = sum(not r.passed for r in results)
    _status("✅ All checks passed" if not failed else f"❌ {failed} checks failed")
    return 0 if not failed else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point for the triperc command.

    Returns:
        Process exit status: 0 on success, 2 for usage and config errors,
        3 for numeric range errors, 1 for other failures
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        print_welcome()
        return 0

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        settings = resolve_settings(args)
        return args.handler(args, settings)
    except TripercError as e:
        _status(f"❌ Error: {e}")
        return e.exit_code
    except KeyboardInterrupt:
        _status("\n👋 Interrupted")
        return 130


if __name__ == "__main__":
    sys.exit(main())
