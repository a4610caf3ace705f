"""Command-line front end.

    tidalgrid simulate --scenario s.cfg --out results/ [--p-tidal KW --p-solar KW --span H]
    tidalgrid grid     --scenario s.cfg --out results/ --slice {lib-only,vrfb-only,no-pv,no-tidal}
    tidalgrid optimize --scenario s.cfg --out results/ [--seed N --swarm-size N]
    tidalgrid sweep    --scenario s.cfg --out results/ --component vrfb_module

Exit status: 0 on success, 1 on a runtime failure, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import config as cfg
from .optimize import SLICES, PsoConfig, default_workers, grid_search, two_stage, write_grid_csv, write_progress_csv
from .profiles import ProfileError
from .sensitivity import SweepSpec, cost_sweep, default_multipliers, write_sweep_csv
from .simulate import COST_COMPONENTS, DesignPoint, run_year, write_summary_csv, write_traces_csv
from .economics import write_breakdown_csv

SUBCOMMANDS = ("simulate", "grid", "optimize", "sweep")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    scenario: Path
    out: Path
    demand: cfg.ProfileSource
    solar: cfg.ProfileSource
    seed: int = 0
    workers: int = 1
    options: dict = field(default_factory=dict)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tidalgrid", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, type=Path, help="scenario INI file")
    common.add_argument("--out", required=True, type=Path, help="output directory")
    common.add_argument("--seed", type=int, default=0, help="master seed for all randomness")
    common.add_argument("--workers", type=_positive_int, default=None,
                        help="parallel evaluation processes (default: all cores)")
    demand = common.add_mutually_exclusive_group()
    demand.add_argument("--demand-csv", type=Path, help="8760-row hourly load shape")
    demand.add_argument("--synth-demand", type=float, metavar="GWH", help="synthetic load with this annual energy")
    solar = common.add_mutually_exclusive_group()
    solar.add_argument("--solar-csv", type=Path, help="8760-row per-kW solar output")
    solar.add_argument("--synth-solar", type=float, metavar="CF", help="synthetic solar at this capacity factor")

    pso = argparse.ArgumentParser(add_help=False)
    pso.add_argument("--swarm-size", type=_positive_int, default=200)
    pso.add_argument("--max-iterations", type=_positive_int, default=200)

    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", parents=[common], help="simulate one design")
    sim.add_argument("--p-tidal", type=float, default=1700.0, help="tidal rated power, kW")
    sim.add_argument("--p-solar", type=float, default=500.0, help="solar rated power, kW")
    sim.add_argument("--span", type=float, default=15.0, help="controller moving-average span, h")

    grid = sub.add_parser("grid", parents=[common], help="LCOE on a 2-D log grid slice")
    grid.add_argument("--slice", required=True, choices=sorted(SLICES))
    grid.add_argument("--n-per-axis", type=int, default=30)
    grid.add_argument("--refine", action="store_true", help="polish the best grid point locally")

    sub.add_parser("optimize", parents=[common, pso], help="two-stage PSO + local refinement")

    sweep = sub.add_parser("sweep", parents=[common, pso], help="re-optimize across a cost multiplier sweep")
    sweep.add_argument("--component", required=True, choices=COST_COMPONENTS)
    sweep.add_argument("--steps", type=int, default=20)
    sweep.add_argument("--n-seeds", type=_positive_int, default=1, help="PSO restarts per step (best kept)")
    return parser


def parse_args(argv) -> RunConfig:
    """Parse and validate ``argv``; raises ``SystemExit(2)`` on usage errors."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cp = cfg.read_config(ns.scenario)
        base = ns.scenario.parent
        demand = (cfg.ProfileSource("csv", ns.demand_csv) if ns.demand_csv is not None
                  else cfg.ProfileSource("synth", ns.synth_demand) if ns.synth_demand is not None
                  else cfg.profile_source(cp, "demand", base)
                  or cfg.ProfileSource("synth", float(cp.get("demand", "annual_energy_gwh", fallback=4.57))))
        solar = (cfg.ProfileSource("csv", ns.solar_csv) if ns.solar_csv is not None
                 else cfg.ProfileSource("synth", ns.synth_solar) if ns.synth_solar is not None
                 else cfg.profile_source(cp, "solar", base) or cfg.ProfileSource("synth", 0.159))
    except cfg.ConfigError as exc:
        parser.error(str(exc))
    if ns.command == "grid" and ns.n_per_axis < 2:
        parser.error("--n-per-axis must be at least 2")
    if ns.command == "sweep" and ns.steps < 2:
        parser.error("--steps must be at least 2")
    options = {k: v for k, v in vars(ns).items()
               if k not in ("command", "scenario", "out", "seed", "workers",
                            "demand_csv", "synth_demand", "solar_csv", "synth_solar")}
    workers = ns.workers if ns.workers is not None else default_workers()
    return RunConfig(ns.command, ns.scenario, ns.out, demand, solar, ns.seed, workers, options)


def _summary_line(label, lcoe, design) -> str:
    return (f"{label}: LCOE {lcoe:.6g} $/MWh | p_tidal {design.p_tidal:.6g} kW | "
            f"p_solar {design.p_solar:.6g} kW | span {design.span:.6g} h")


def run(config: RunConfig) -> int:
    try:
        cp = cfg.read_config(config.scenario)
        scenario = cfg.build_scenario(cp, config.demand, config.solar, config.seed)
        bounds = cfg.build_bounds(cp)
        config.out.mkdir(parents=True, exist_ok=True)
        opts = config.options
        out = config.out

        if config.command == "simulate":
            design = DesignPoint(opts["p_tidal"], opts["p_solar"], opts["span"])
            result = run_year(design, scenario)
            write_traces_csv(out / "traces.csv", result)
            write_summary_csv(out / "summary.csv", result)
            write_breakdown_csv(out / "breakdown.csv", result.breakdown)
            print(_summary_line("simulate", result.total_lcoe, design))

        elif config.command == "grid":
            grid = grid_search(SLICES[opts["slice"]], scenario, opts["n_per_axis"], bounds,
                               refine=opts["refine"], workers=config.workers)
            write_grid_csv(out / "grid.csv", grid)
            sliced = scenario.replace(routing=grid.slice.routing)
            write_summary_csv(out / "summary.csv", run_year(grid.best_design, sliced))
            print(_summary_line(f"grid {opts['slice']}", grid.best_lcoe, grid.best_design))

        elif config.command == "optimize":
            pso = PsoConfig(swarm_size=opts["swarm_size"], max_iterations=opts["max_iterations"], seed=config.seed)
            best = two_stage(bounds, scenario, pso, workers=config.workers)
            write_traces_csv(out / "traces.csv", best.result)
            write_summary_csv(out / "summary.csv", best.result)
            write_breakdown_csv(out / "breakdown.csv", best.result.breakdown)
            write_progress_csv(out / "progress.csv", best.history)
            print(_summary_line("optimize", best.lcoe, best.design))

        elif config.command == "sweep":
            pso = PsoConfig(swarm_size=opts["swarm_size"], max_iterations=opts["max_iterations"])
            spec = SweepSpec(opts["component"], default_multipliers(opts["steps"]), config.seed, opts["n_seeds"])
            rows = cost_sweep(spec, scenario, bounds, pso, workers=config.workers)
            write_sweep_csv(out / "sweep.csv", rows)
            base = min(rows, key=lambda r: abs(r.multiplier - 1.0))
            print(_summary_line(f"sweep {spec.component} x{base.multiplier:g}", base.lcoe, base.optimum.design))
        return 0
    except (OSError, ProfileError, cfg.ConfigError, ValueError) as exc:
        print(f"tidalgrid: error: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
