"""One-year hourly evaluation of a microgrid design.

A :class:`Scenario` bundles the exogenous profiles and all cost parameters;
a :class:`DesignPoint` holds the three decision variables. :func:`run_year`
turns the pair into a :class:`SimulationResult` with every hourly trace,
the dependent battery sizes and the LCOE breakdown.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import storage
from .controller import ControllerParams, split_deficit
from .economics import DEFAULT_BACKUP_RATE, ComponentCost, LcoeBreakdown, backup_penalty, lcoe
from .profiles import HOURS, SOLAR_SPEC, TIDAL_SPEC, GeneratorSpec, TidalParams, as_series, tidal_flow
from .storage import BatterySizing, LibParams, VrfbParams

ROUTINGS = ("split", "lib_only", "vrfb_only")
COST_COMPONENTS = ("lib_energy", "vrfb_module", "solar_power", "tidal_power")
TRACE_UNITS = {
    "demand": "kW",
    "tidal_generation": "kW",
    "solar_generation": "kW",
    "deficit": "kW",
    "p_lib": "kW",
    "p_vrfb": "kW",
    "soc_lib": "kWh",
    "soc_vrfb": "kWh",
    "curtailment": "kW",
    "backup": "kW",
}


@dataclass(frozen=True)
class DesignPoint:
    p_tidal: float  # kW
    p_solar: float  # kW
    span: float  # hours

    def __post_init__(self):
        if self.p_tidal < 0 or self.p_solar < 0:
            raise ValueError("rated powers must be nonnegative")
        if not 1.0 <= self.span <= HOURS:
            raise ValueError(f"span must lie in [1, {HOURS}] hours, got {self.span}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_tidal, self.p_solar, self.span)


@dataclass(frozen=True)
class CostMultipliers:
    """Dimensionless scale factors applied to the four swept cost terms."""

    lib_energy: float = 1.0
    vrfb_module: float = 1.0
    solar_power: float = 1.0
    tidal_power: float = 1.0

    def __post_init__(self):
        for name in COST_COMPONENTS:
            if not getattr(self, name) > 0:
                raise ValueError(f"multiplier {name} must be positive")


@dataclass(frozen=True, eq=False)
class Scenario:
    """Everything about the island except the three design variables.

    ``delivered_energy`` (MWh/yr) defaults to the demand's annual total.
    ``routing`` sends the deficit through the moving-average split, or
    entirely to one battery (``"lib_only"`` / ``"vrfb_only"``).
    """

    demand: np.ndarray
    solar_unit: np.ndarray
    tidal: TidalParams = TidalParams()
    lib: LibParams = LibParams()
    vrfb: VrfbParams = VrfbParams()
    solar_spec: GeneratorSpec = SOLAR_SPEC
    tidal_spec: GeneratorSpec = TIDAL_SPEC
    delivered_energy: float | None = None
    backup_rate: float = DEFAULT_BACKUP_RATE
    multipliers: CostMultipliers = CostMultipliers()
    routing: str = "split"
    warmup: str = "zero"
    tidal_unit: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "demand", as_series(self.demand, "demand"))
        object.__setattr__(self, "solar_unit", as_series(self.solar_unit, "solar_unit"))
        if np.any(self.demand < 0) or np.any(self.solar_unit < 0):
            raise ValueError("demand and solar profiles must be nonnegative")
        if self.routing not in ROUTINGS:
            raise ValueError(f"routing must be one of {ROUTINGS}")
        if self.backup_rate < 0:
            raise ValueError("backup_rate must be nonnegative")
        if self.delivered_energy is not None and self.delivered_energy < 0:
            raise ValueError("delivered_energy must be nonnegative")
        ControllerParams(1.0, self.warmup)
        object.__setattr__(self, "tidal_unit", as_series(tidal_flow(np.arange(HOURS), self.tidal), "tidal"))

    @property
    def annual_delivered_mwh(self) -> float:
        if self.delivered_energy is not None:
            return float(self.delivered_energy)
        return float(self.demand.sum()) / 1000.0

    def with_multiplier(self, component: str, value: float) -> "Scenario":
        if component not in COST_COMPONENTS:
            raise ValueError(f"unknown cost component {component!r}; expected one of {COST_COMPONENTS}")
        return self.replace(multipliers=replace(self.multipliers, **{component: value}))

    def replace(self, **changes) -> "Scenario":
        fields = {
            name: getattr(self, name)
            for name in self.__dataclass_fields__
            if name != "tidal_unit"
        }
        fields.update(changes)
        return Scenario(**fields)


@dataclass(frozen=True, eq=False)
class SimulationResult:
    design: DesignPoint
    traces: dict[str, np.ndarray]
    lib: BatterySizing
    vrfb: BatterySizing
    breakdown: LcoeBreakdown
    backup_energy: float  # kWh/yr drawn from last-resort generation
    curtailed_surplus: float  # kWh/yr left in storage above the starting charge

    @property
    def total_lcoe(self) -> float:
        return self.breakdown.total

    def summary_rows(self) -> list[tuple[str, str, float, str]]:
        """Flat ``(section, name, value, unit)`` rows for the summary CSV."""
        d = self.design
        rows = [
            ("design", "p_tidal", d.p_tidal, "kW"),
            ("design", "p_solar", d.p_solar, "kW"),
            ("design", "span", d.span, "h"),
        ]
        for label, s in (("lib", self.lib), ("vrfb", self.vrfb)):
            rows += [
                (label, "rated_power", s.rated_power, "kW"),
                (label, "capacity", s.capacity, "kWh"),
                (label, "ep_ratio", s.ep_ratio, "h"),
                (label, "cycles_per_year", s.cycles_per_year, "1/yr"),
                (label, "realized_lifetime", s.realized_lifetime, "yr"),
                (label, "capital_cost", s.capital_cost, "USD"),
            ]
        rows += [
            ("energy", "tidal_generation", float(self.traces["tidal_generation"].sum()), "kWh/yr"),
            ("energy", "solar_generation", float(self.traces["solar_generation"].sum()), "kWh/yr"),
            ("energy", "demand", float(self.traces["demand"].sum()), "kWh/yr"),
            ("energy", "backup", self.backup_energy, "kWh/yr"),
            ("energy", "curtailed_surplus", self.curtailed_surplus, "kWh/yr"),
        ]
        rows += [("lcoe", name, value, "USD/MWh") for name, value in self.breakdown.as_rows()]
        rows.append(("lcoe", "total", self.total_lcoe, "USD/MWh"))
        return rows


def dispatch(deficit: np.ndarray, span: float, routing: str = "split", warmup: str = "zero"):
    """Return ``(p_lib, p_vrfb)`` for the chosen routing."""
    if routing == "split":
        p_vrfb, p_lib = split_deficit(deficit, ControllerParams(span, warmup))
    elif routing == "lib_only":
        p_lib, p_vrfb = deficit.copy(), np.zeros_like(deficit)
    elif routing == "vrfb_only":
        p_lib, p_vrfb = np.zeros_like(deficit), deficit.copy()
    else:
        raise ValueError(f"routing must be one of {ROUTINGS}")
    return p_lib, p_vrfb


def run_year(design: DesignPoint, scenario: Scenario) -> SimulationResult:
    """Simulate the year hour by hour and cost the resulting system."""
    m = scenario.multipliers
    tidal_gen = scenario.tidal_unit * design.p_tidal
    solar_gen = scenario.solar_unit * design.p_solar
    deficit = scenario.demand - tidal_gen - solar_gen
    p_lib, p_vrfb = dispatch(deficit, design.span, scenario.routing, scenario.warmup)

    lib = storage.size_battery(p_lib, "lib", scenario.lib, m.lib_energy)
    vrfb = storage.size_battery(p_vrfb, "vrfb", scenario.vrfb, m.vrfb_module)
    soc_lib = storage.soc_trajectory(p_lib, scenario.lib.round_trip_eff)
    soc_vrfb = storage.soc_trajectory(p_vrfb, scenario.vrfb.round_trip_eff)

    # the combined store must end the year where it started; any deficit is bought in
    net_stored = float(
        storage.stored_energy_change(p_lib, scenario.lib.round_trip_eff).sum()
        + storage.stored_energy_change(p_vrfb, scenario.vrfb.round_trip_eff).sum()
    )
    backup_energy = max(0.0, -net_stored)
    curtailed_surplus = max(0.0, net_stored)

    charging = np.minimum(p_lib, 0.0) + np.minimum(p_vrfb, 0.0)
    curtailment = np.maximum(0.0, np.maximum(-deficit, 0.0) + charging)

    components = [
        ComponentCost("tidal", design.p_tidal * scenario.tidal_spec.unit_cost * m.tidal_power,
                      scenario.tidal_spec.lifetime),
        ComponentCost("solar", design.p_solar * scenario.solar_spec.unit_cost * m.solar_power,
                      scenario.solar_spec.lifetime),
        ComponentCost("lib_energy", lib.energy_cost, lib.realized_lifetime),
        ComponentCost("lib_power", lib.power_cost, lib.realized_lifetime),
        ComponentCost("vrfb_energy", vrfb.energy_cost, vrfb.realized_lifetime),
        ComponentCost("vrfb_power", vrfb.power_cost, vrfb.realized_lifetime),
    ]
    delivered = scenario.annual_delivered_mwh
    if delivered > 0:
        penalty = backup_penalty(backup_energy / 1000.0, scenario.backup_rate, delivered)
        breakdown = lcoe(components, delivered, penalty)
    elif all(c.capital_cost == 0 for c in components) and backup_energy == 0:
        breakdown = LcoeBreakdown()
    else:
        raise ValueError("scenario delivers no energy but the design has nonzero cost")

    traces = {
        "demand": scenario.demand,
        "tidal_generation": tidal_gen,
        "solar_generation": solar_gen,
        "deficit": deficit,
        "p_lib": p_lib,
        "p_vrfb": p_vrfb,
        "soc_lib": soc_lib,
        "soc_vrfb": soc_vrfb,
        "curtailment": curtailment,
        "backup": np.zeros(HOURS),
    }
    return SimulationResult(design, traces, lib, vrfb, breakdown, backup_energy, curtailed_surplus)


def objective(design: DesignPoint, scenario: Scenario) -> float:
    """Total LCOE in $/MWh delivered."""
    return run_year(design, scenario).total_lcoe


def write_traces_csv(path, result: SimulationResult) -> None:
    names = list(TRACE_UNITS)
    columns = [result.traces[n] for n in names]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["hour"] + [f"{n}_{TRACE_UNITS[n]}" for n in names])
        for t in range(HOURS):
            writer.writerow([t] + [repr(float(c[t])) for c in columns])


def write_summary_csv(path, result: SimulationResult) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["section", "name", "value", "unit"])
        for section, name, value, unit in result.summary_rows():
            writer.writerow([section, name, repr(float(value)), unit])


def evaluate_many(designs, scenario: Scenario) -> np.ndarray:
    """Total LCOE for each row ``(p_tidal, p_solar, span)`` of ``designs``.

    Uses the compiled single-pass kernel; agrees with :func:`objective` to
    rounding. Rows are not validated beyond shape.
    """
    from ._kernel import lcoe_batch, pack_params

    x = np.ascontiguousarray(np.atleast_2d(np.asarray(designs, dtype=float)))
    if x.ndim != 2 or x.shape[1] != 3:
        raise ValueError("designs must have shape (n, 3)")
    values = lcoe_batch(scenario.demand, scenario.solar_unit, scenario.tidal_unit, x, pack_params(scenario))
    if np.isnan(values).any():
        raise ValueError("scenario delivers no energy but a design has nonzero cost")
    return values
