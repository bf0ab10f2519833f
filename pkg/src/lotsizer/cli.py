"""``lotsizer`` command line: solve, check, oracle, export and bench."""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bench
from .formats import export_lp, export_mps, format_number, parse_instance, read_schedule, \
    write_schedule
from .formulations import BUILDERS, extract_schedule, schedule_to_values
from .model import (
    DlsInstance,
    ElspInstance,
    InstanceError,
    check_elsp_feasibility,
    check_elsp_schedule,
    check_schedule,
    elsp_to_dls,
    evaluate_cost,
)
from .oracle import wagner_whitin_dp
from .solver import SolveOptions, branch_and_bound

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_LIMIT = 3
EXIT_INTERNAL = 70
EXIT_USAGE = 64
EXIT_PARSE = 65

BENCH_TIME_LIMIT = 60.0  # per instance, when neither flag nor environment sets one
FORMULATIONS = tuple(BUILDERS)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v >= 0 or math.isinf(v):
        raise argparse.ArgumentTypeError(f"must be a finite value >= 0: {text!r}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lotsizer", description="Lot-sizing MIP toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def solver_flags(sp):
        sp.add_argument("--time-limit", type=_positive_float, default=None,
                        help="seconds per solve (default: $LOTSIZER_TIME_LIMIT; bench uses 60)")
        sp.add_argument("--node-limit", type=_positive_int, default=None,
                        help="stop after this many nodes (reproducible, unlike time)")
        sp.add_argument("--gap", type=_positive_float, default=1e-6,
                        help="relative gap target (default 1e-6)")
        sp.add_argument("--threads", type=_positive_int, default=1,
                        help="node LP workers; more than one gives up determinism")
        sp.add_argument("--no-cuts", action="store_true", help="disable cover cuts")

    def elsp_flags(sp):
        sp.add_argument("--tau", type=_positive_float, default=None, help="ELSP period length")
        sp.add_argument("--initial-inventory-days", type=_positive_float, default=None,
                        help="ELSP start stock as days of demand")
        sp.add_argument("--min-run-hours", type=_positive_float, default=None,
                        help="ELSP minimum run length in hours")

    s = sub.add_parser("solve", help="build and solve the MIP of an instance")
    s.add_argument("instance")
    s.add_argument("--formulation", choices=FORMULATIONS)
    s.add_argument("--warm-start", metavar="SCHEDULE_CSV")
    s.add_argument("--output", "-o", metavar="CSV", help="schedule file (default: stdout)")
    solver_flags(s)
    elsp_flags(s)

    c = sub.add_parser("check", help="necessary feasibility condition of an ELSP instance")
    c.add_argument("instance")
    elsp_flags(c)

    o = sub.add_parser("oracle", help="Wagner-Whitin recursion for one product")
    o.add_argument("instance")
    o.add_argument("--holding-convention", choices=("end_of_period", "entering"),
                   default="end_of_period")

    e = sub.add_parser("export", help="write the MIP in MPS or LP format")
    e.add_argument("instance")
    e.add_argument("--format", choices=("mps", "lp"), required=True)
    e.add_argument("--formulation", choices=FORMULATIONS)
    e.add_argument("--output", "-o")
    elsp_flags(e)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("--suite", choices=bench.SUITES, required=True)
    b.add_argument("--grid", default="2x2", help="synthetic grid PERIOD_STEPSxPRODUCT_STEPS")
    b.add_argument("--period-step", type=_positive_int, default=10)
    b.add_argument("--product-step", type=_positive_int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--stretch", action="store_true", help="add the 10 and 5 day periods")
    b.add_argument("--output", "-o", metavar="CSV")
    b.add_argument("--no-timing", action="store_true", help="omit the wall-time column")
    solver_flags(b)
    return p


# ---------------------------------------------------------------------------


def load(path: str):
    """Instance from a file, falling back to the bundled data sets by name."""
    p = Path(path)
    if p.exists():
        text = p.read_text(encoding="utf-8")
    else:
        try:
            text = bench.bundled_text(p.name if p.suffix else p.name + ".json")
        except (FileNotFoundError, OSError):
            raise FileNotFoundError(f"no such instance file: {path}") from None
    return parse_instance(text)


def _apply_elsp_flags(inst, args):
    if not isinstance(inst, ElspInstance):
        if any(getattr(args, k, None) is not None
               for k in ("tau", "initial_inventory_days", "min_run_hours")):
            raise UsageError("--tau, --initial-inventory-days and --min-run-hours "
                             "apply to ELSP instances only")
        return inst
    changes = {}
    if args.tau is not None:
        changes["period_length"] = args.tau
    if args.initial_inventory_days is not None:
        changes["initial_inventory"] = inst.demand_rate * args.initial_inventory_days
    if args.min_run_hours is not None:
        changes["min_run_hours"] = args.min_run_hours
    return inst.replace(**changes) if changes else inst


def _options(args, warm=None) -> SolveOptions:
    limit = args.time_limit
    if limit is None and os.environ.get("LOTSIZER_TIME_LIMIT"):
        try:
            limit = float(os.environ["LOTSIZER_TIME_LIMIT"])
        except ValueError:
            raise UsageError("LOTSIZER_TIME_LIMIT must be a number of seconds") from None
    if limit is None and args.command == "bench":
        limit = BENCH_TIME_LIMIT
    return SolveOptions(time_limit=limit, node_limit=args.node_limit, relative_gap_target=max(args.gap, 1e-12),
                        worker_count=args.threads, deterministic=args.threads == 1,
                        enable_cover_cuts=not args.no_cuts, warm_start=warm)


def _build(inst, formulation: Optional[str]):
    name = formulation or bench.default_formulation(inst)
    if (name == "elsp") != isinstance(inst, ElspInstance):
        raise UsageError(f"formulation {name} does not match a {type(inst).__name__}")
    try:
        model, catalog = BUILDERS[name](inst)
    except InstanceError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return name, model, catalog


def _fmt(v: float) -> str:
    if not math.isfinite(v):
        return "inf" if v > 0 else "-inf"
    return format_number(round(v, 6))


def cmd_solve(args, out) -> int:
    inst = _apply_elsp_flags(load(args.instance), args)
    name, model, catalog = _build(inst, args.formulation)
    warm = None
    if args.warm_start:
        try:
            schedule, _ = read_schedule(Path(args.warm_start).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            print(f"lotsizer: cannot read warm start: {exc}", file=sys.stderr)
            return EXIT_PARSE
        n, m = catalog.n_periods, catalog.n_products
        if schedule.shape != (n, m):
            print(f"lotsizer: warm start has shape {schedule.shape}, expected {(n, m)}",
                  file=sys.stderr)
            return EXIT_PARSE
        warm = schedule_to_values(catalog, schedule)
    sol = branch_and_bound(model, _options(args, warm))
    print(f"objective {_fmt(sol.objective)}, status {sol.status}", file=out)
    print(f"bound {_fmt(sol.best_bound)}, gap {_fmt(sol.relative_gap)}, "
          f"nodes {sol.node_count}, time {sol.wall_time:.3f}s, formulation {name}", file=out)
    if isinstance(inst, ElspInstance):
        print(f"daily cost {_fmt(sol.objective / inst.horizon_days)}", file=out)
    if sol.values is not None:
        schedule = extract_schedule(catalog, sol)
        if isinstance(inst, ElspInstance):
            problems = check_elsp_schedule(inst, schedule)
            costs = evaluate_cost(elsp_to_dls(inst), schedule)
        else:
            problems = check_schedule(inst, schedule, setup_rule=catalog.setup_rule)
            costs = evaluate_cost(inst, schedule)
        if problems:
            for v in problems[:10]:
                print(f"lotsizer: schedule check failed: {v}", file=sys.stderr)
            return EXIT_INTERNAL
        for key, v in costs.as_dict().items():
            print(f"{key} {_fmt(v)}", file=out)
        text = write_schedule(schedule, costs)
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            out.write(text)
    if sol.status in ("optimal", "feasible"):
        return EXIT_OK
    if sol.status in ("infeasible", "unbounded"):
        return EXIT_INFEASIBLE
    return EXIT_LIMIT


def cmd_check(args, out) -> int:
    inst = load(args.instance)
    if not isinstance(inst, ElspInstance):
        raise UsageError("check applies to ELSP instances only; "
                         f"{args.instance} is a dls instance")
    inst = _apply_elsp_flags(inst, args)
    rep = check_elsp_feasibility(inst)
    util = " ".join(f"{u:.4f}" for u in rep.utilization)
    print(f"utilization {util}", file=out)
    print(f"max utilization {rep.max_utilization:.4f} (product {rep.max_utilization_product + 1})",
          file=out)
    print(f"demand time {rep.demand_time_days:.4f} days", file=out)
    print(f"setup time {rep.setup_time_days:.4f} days", file=out)
    print(f"total required {rep.total_required_days:.4f} days", file=out)
    tau = f"{rep.period_days:g}"
    req = f"{rep.total_required_days:.1f}"
    if rep.feasible:
        print(f"required {req} days <= {tau}: feasible", file=out)
        return EXIT_OK
    if rep.max_utilization > 1:
        print(f"infeasible: {rep.reason}", file=out)
    elif np.any(inst.initial_inventory > 0):
        print(f"required {req} days > {tau}: infeasible", file=out)
    else:
        print(f"required {req} days > {tau}: infeasible without initial inventory", file=out)
    return EXIT_INFEASIBLE


def cmd_oracle(args, out) -> int:
    inst = load(args.instance)
    if not isinstance(inst, DlsInstance) or inst.n_products != 1:
        raise UsageError("oracle needs a single-product dls instance")
    try:
        res = wagner_whitin_dp(inst, holding_convention=args.holding_convention)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    q = res.schedule.quantities[:, 0]
    lots = [(t + 1, v) for t, v in enumerate(q) if v > 0]
    print(f"optimal cost {_fmt(res.cost)}", file=out)
    print(f"setups {len(lots)}", file=out)
    print("lots " + " ".join(f"t{t}:{_fmt(v)}" for t, v in lots), file=out)
    return EXIT_OK


def cmd_export(args, out) -> int:
    inst = _apply_elsp_flags(load(args.instance), args)
    _, model, _ = _build(inst, args.formulation)
    text = export_mps(model) if args.format == "mps" else export_lp(model)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    try:
        grid = bench.parse_grid(args.grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = bench.run_suite(args.suite, _options(args), grid=grid, stretch=args.stretch,
                             period_step=args.period_step, product_step=args.product_step,
                             seed=args.seed)
    out.write(report.to_table(timing=not args.no_timing))
    solved, total = report.solved_count()
    print(f"{solved} out of {total} instances solved to optimality", file=out)
    if args.output:
        Path(args.output).write_text(report.to_csv(timing=not args.no_timing), encoding="utf-8")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "check": cmd_check, "oracle": cmd_oracle,
            "export": cmd_export, "bench": cmd_bench}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"lotsizer: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InstanceError as exc:
        print(f"lotsizer: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"lotsizer: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
