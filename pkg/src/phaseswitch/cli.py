"""Command-line interface for phaseswitch."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from phaseswitch.config import (
    AllocationStrategy,
    Config,
    MarketMode,
    OutputFormat,
    SelectionStrategy,
    SolverType,
)
from phaseswitch.exceptions import PhaseSwitchError
from phaseswitch.grid import load_network
from phaseswitch.harness import compare_strategies, emit_comparison, emit_report, run_scenario
from phaseswitch.scenario import ScenarioConfig, list_presets, load_preset, load_scenario


def _values(enum_type) -> List[str]:
    return [m.value for m in enum_type]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaseswitch",
        description="phaseswitch - Simulate dynamic phase switching on LV grids with local energy markets.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  phaseswitch presets
  phaseswitch run --preset A --strategy dynamic --budget 3 --out results
  phaseswitch run --config scenario.json --format json
  phaseswitch compare --presets A --configs static.json
  phaseswitch validate --network grid.json
        """,
    )
    parser.add_argument("--version", action="store_true", help="Show version and exit")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log per-slot diagnostics")
    sub = parser.add_subparsers(dest="command")

    run = sub.add_parser("run", help="Run one scenario and write its report")
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="Scenario JSON file")
    source.add_argument("--preset", help="Bundled preset name (see 'presets')")
    run.add_argument("--seed", type=int, help="Override the scenario seed")
    run.add_argument("--out", default=".", help="Output directory (default: current directory)")
    run.add_argument(
        "--format", choices=_values(OutputFormat), default="both", help="Report format (default: both)"
    )
    run.add_argument("--strategy", choices=_values(AllocationStrategy), help="Allocation strategy")
    run.add_argument("--selection", choices=_values(SelectionStrategy), help="Switch selection heuristic")
    run.add_argument("--budget", type=int, help="Number of phase switches")
    run.add_argument("--market-mode", choices=_values(MarketMode), help="How net flows are produced")
    run.add_argument("--days", type=int, help="Horizon in days")
    _engine_arguments(run)

    compare = sub.add_parser("compare", help="Compare scenarios against the no-switching baseline")
    compare.add_argument("--configs", nargs="+", default=[], help="Scenario JSON files")
    compare.add_argument("--presets", nargs="+", default=[], help="Bundled preset names")
    compare.add_argument("--out", help="Write the comparison table to this CSV file")
    _engine_arguments(compare)

    sub.add_parser("presets", help="List bundled preset scenarios")

    validate = sub.add_parser("validate", help="Check a network file")
    validate.add_argument("--network", required=True, help="Network JSON file")
    return parser


def _engine_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--allow-nonconverged",
        action="store_true",
        help="Exit 0 even when some load flows did not converge",
    )
    parser.add_argument("--workers", type=int, default=1, help="Load-flow worker threads (default: 1)")
    parser.add_argument(
        "--solver", choices=_values(SolverType), default="auto", help="Allocation solver (default: auto)"
    )


def _engine_config(args: argparse.Namespace) -> Config:
    return Config(
        solver=SolverType(args.solver),
        workers=max(1, args.workers),
        verbose=args.verbose,
    )


def _scenario(args: argparse.Namespace) -> ScenarioConfig:
    scenario = load_scenario(args.config) if args.config else load_preset(args.preset)
    changes = {}
    for option, name in (
        ("seed", "seed"),
        ("strategy", "allocation"),
        ("selection", "selection"),
        ("budget", "budget"),
        ("market_mode", "market_mode"),
        ("days", "days"),
    ):
        value = getattr(args, option)
        if value is not None:
            changes[name] = value
    return scenario.replace(**changes) if changes else scenario


def _run(args: argparse.Namespace) -> int:
    scenario = _scenario(args)
    base_dir = Path(args.config).parent if args.config else None
    report = run_scenario(scenario, _engine_config(args), base_dir=base_dir)
    print(report)
    for path in emit_report(report, args.format, args.out):
        print("Wrote {0}".format(path))
    if report.unconverged_slots and not args.allow_nonconverged:
        print(
            "ERROR: {0} slot(s) did not converge".format(len(report.unconverged_slots)),
            file=sys.stderr,
        )
        return 1
    return 0


def _compare(args: argparse.Namespace) -> int:
    if not args.configs and not args.presets:
        print("ERROR: give --configs and/or --presets", file=sys.stderr)
        return 2
    scenarios = [load_scenario(path) for path in args.configs]
    scenarios.extend(load_preset(name) for name in args.presets)
    base_dirs = [Path(path).parent for path in args.configs] + [None] * len(args.presets)
    table = compare_strategies(scenarios, _engine_config(args), base_dirs=base_dirs)
    print(table.to_frame().to_string(index=False))
    for row in table.flagged:
        print("FLAGGED: {0}/{1} peak VUF {2:.3f}%".format(row.scenario, row.strategy, row.peak_vuf_pct))
    if args.out:
        print("Wrote {0}".format(emit_comparison(table, args.out)))
    unconverged = any(r.unconverged_slots for r in (table.baseline,) + table.reports)
    if unconverged and not args.allow_nonconverged:
        print("ERROR: some slots did not converge", file=sys.stderr)
        return 1
    return 0


def _presets() -> int:
    for name in list_presets():
        scenario = load_preset(name)
        print(
            "{0:<10} {1} households, PV {2:.0%}, battery {3:.0%}, k={4}  {5}".format(
                scenario.name,
                scenario.household_count,
                scenario.pv_fraction,
                scenario.battery_fraction,
                scenario.budget,
                scenario.description,
            )
        )
    return 0


def _validate(args: argparse.Namespace) -> int:
    model = load_network(args.network)
    print("Network: {0}".format(model.name))
    print("Buses: {0}, feeders: {1}".format(len(model.buses), ", ".join(model.feeders)))
    print("Households: {0}".format(len(model.households)))
    print("OK")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.version:
        from phaseswitch import __version__

        print("phaseswitch {0}".format(__version__))
        return 0

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        if args.command == "run":
            return _run(args)
        if args.command == "compare":
            return _compare(args)
        if args.command == "presets":
            return _presets()
        if args.command == "validate":
            return _validate(args)
    except PhaseSwitchError as e:
        print("ERROR: {0}".format(e), file=sys.stderr)
        return 2
    parser.print_help()
    return 2


if __name__ == "__main__":
    sys.exit(main())
