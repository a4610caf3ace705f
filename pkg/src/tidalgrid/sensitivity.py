"""Cost sensitivity sweeps: re-optimize the design as one cost multiplier varies."""
from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .optimize import OptimizationResult, PsoConfig, SearchBounds, two_stage
from .simulate import COST_COMPONENTS, Scenario

BREAKDOWN_COLUMNS = ("tidal", "solar", "lib_energy", "lib_power", "vrfb_energy", "vrfb_power", "backup")


def default_multipliers(n: int = 20, low: float = 0.1, high: float = 2.0) -> tuple[float, ...]:
    # rounding keeps 1.0 exact so the baseline step reproduces an unswept run
    return tuple(round(float(m), 12) for m in np.linspace(low, high, n))


@dataclass(frozen=True)
class SweepSpec:
    component: str
    multipliers: tuple[float, ...] = default_multipliers()
    seed: int = 0
    n_seeds: int = 1

    def __post_init__(self):
        if self.component not in COST_COMPONENTS:
            raise ValueError(f"component must be one of {COST_COMPONENTS}")
        m = np.asarray(self.multipliers, dtype=float)
        if m.size == 0 or np.any(m <= 0) or np.any(np.diff(m) <= 0):
            raise ValueError("multipliers must be positive and strictly increasing")
        if self.n_seeds < 1:
            raise ValueError("n_seeds must be at least 1")


def step_seeds(master_seed: int, step: int, n_seeds: int = 1) -> list[int]:
    """Independent PSO seeds for one sweep step, derived from the master seed."""
    ss = np.random.SeedSequence([master_seed, step])
    return [int(s) for s in ss.generate_state(n_seeds, dtype=np.uint32)]


def best_of_seeds(bounds: SearchBounds, scenario: Scenario, config: PsoConfig,
                  seeds) -> OptimizationResult:
    """Run :func:`two_stage` once per seed and keep the lowest LCOE (first wins ties)."""
    best = None
    for s in seeds:
        res = two_stage(bounds, scenario, replace(config, seed=s))
        if best is None or res.lcoe < best.lcoe:
            best = res
    return best


@dataclass(frozen=True, eq=False)
class SweepRow:
    multiplier: float
    seeds: tuple[int, ...]
    optimum: OptimizationResult

    @property
    def lcoe(self) -> float:
        return self.optimum.lcoe


def _run_step(args):
    spec, step, base_scenario, bounds, config = args
    m = spec.multipliers[step]
    seeds = step_seeds(spec.seed, step, spec.n_seeds)
    scenario = base_scenario.with_multiplier(spec.component, m)
    return SweepRow(m, tuple(seeds), best_of_seeds(bounds, scenario, config, seeds))


def cost_sweep(spec: SweepSpec, base_scenario: Scenario, bounds: SearchBounds = SearchBounds(),
               config: PsoConfig = PsoConfig(), workers: int = 1) -> list[SweepRow]:
    """Re-optimize the full design at each multiplier of one cost component.

    Only the named cost is scaled: ``lib_energy`` the Li-ion $/kWh,
    ``vrfb_module`` the E/P-dependent module cost, ``solar_power`` and
    ``tidal_power`` the generator $/kW. Steps are independent; rows come
    back in multiplier order whatever the degree of parallelism.
    """
    jobs = [(spec, i, base_scenario, bounds, config) for i in range(len(spec.multipliers))]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_run_step, jobs))
    return [_run_step(job) for job in jobs]


def sweep_table(rows) -> list[dict]:
    table = []
    for row in rows:
        res = row.optimum.result
        d = row.optimum.design
        entry = {
            "multiplier": row.multiplier,
            "p_tidal_kW": d.p_tidal,
            "p_solar_kW": d.p_solar,
            "span_h": d.span,
            "lib_rated_power_kW": res.lib.rated_power,
            "lib_capacity_kWh": res.lib.capacity,
            "lib_lifetime_yr": res.lib.realized_lifetime,
            "vrfb_rated_power_kW": res.vrfb.rated_power,
            "vrfb_capacity_kWh": res.vrfb.capacity,
            "vrfb_lifetime_yr": res.vrfb.realized_lifetime,
        }
        contributions = dict(res.breakdown.contributions, backup=res.breakdown.backup)
        for name in BREAKDOWN_COLUMNS:
            entry[f"lcoe_{name}"] = contributions.get(name, 0.0)
        entry["lcoe_total"] = res.total_lcoe
        table.append(entry)
    return table


def write_sweep_csv(path, rows) -> None:
    table = sweep_table(rows)
    if not table:
        raise ValueError("no sweep rows to write")
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(table[0]))
        for entry in table:
            writer.writerow([repr(float(v)) for v in entry.values()])
