"""Battery sizing, state of charge, cycle depletion and capital cost.

Sign convention throughout: a positive power means the battery discharges.
Time steps are one hour, so kW and kWh-per-step are numerically identical.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LibParams:
    energy_cost: float = 285.0  # $/kWh
    power_cost: float = 306.0  # $/kW
    max_lifetime: float = 10.0  # years
    cycle_life: float = 3500.0
    round_trip_eff: float = 1.0

    def __post_init__(self):
        _check_params(self)


@dataclass(frozen=True)
class VrfbParams:
    """Flow battery cost and life parameters.

    The module cost per kWh follows ``a * exp(b / ep_ratio) - c``; the
    remaining adders (construction and commissioning per kWh, power
    conversion and balance of plant per kW) are flat.
    """

    module_cost_a: float = 7.004e4
    module_cost_b: float = 0.004021
    module_cost_c: float = 6.9837e4
    candc_cost: float = 650.0  # $/kWh
    pcs_cost: float = 211.0  # $/kW
    bop_cost: float = 95.0  # $/kW
    max_lifetime: float = 15.0
    cycle_life: float = 10000.0
    round_trip_eff: float = 1.0

    def __post_init__(self):
        _check_params(self)
        if not self.module_cost_a > self.module_cost_c:
            raise ValueError("module_cost_a must exceed module_cost_c")


def _check_params(params):
    for name, value in vars(params).items():
        if value < 0:
            raise ValueError(f"{name} must be nonnegative, got {value}")
    if not 0 < params.round_trip_eff <= 1:
        raise ValueError("round_trip_eff must lie in (0, 1]")
    if params.max_lifetime <= 0 or params.cycle_life <= 0:
        raise ValueError("max_lifetime and cycle_life must be positive")


@dataclass(frozen=True)
class BatterySizing:
    rated_power: float  # kW
    capacity: float  # kWh
    cycles_per_year: float
    realized_lifetime: float  # years
    capital_cost: float = 0.0  # $
    energy_cost: float = 0.0  # $, capacity-proportional part of capital_cost
    power_cost: float = 0.0  # $, rated-power-proportional part of capital_cost

    @property
    def ep_ratio(self) -> float:
        """Energy-to-power ratio in hours (0 for a battery with no rated power)."""
        return self.capacity / self.rated_power if self.rated_power > 0 else 0.0


def size_power(p) -> float:
    """Rated power: the largest (dis)charge magnitude seen over the year."""
    p = np.asarray(p, dtype=float)
    return float(np.max(np.abs(p))) if p.size else 0.0


def stored_energy_change(p, round_trip_eff: float = 1.0) -> np.ndarray:
    """Per-hour change of stored energy; charging is derated by the efficiency."""
    p = np.asarray(p, dtype=float)
    if round_trip_eff == 1.0:
        return -p
    return np.where(p > 0, -p, -p * round_trip_eff)


def soc_trajectory(p, round_trip_eff: float = 1.0) -> np.ndarray:
    """Stored energy (kWh) at the end of each hour, shifted so its minimum is 0."""
    w = np.cumsum(stored_energy_change(p, round_trip_eff))
    return w - w.min()


def size_capacity(soc) -> float:
    """Energy capacity: the fullest the battery ever gets."""
    return float(np.max(soc))


def annual_charge_imbalance(p, round_trip_eff: float = 1.0) -> float:
    """Energy (kWh) by which the year ends below where it started; never negative."""
    return max(0.0, -float(np.sum(stored_energy_change(p, round_trip_eff))))


def lib_cycles_per_year(p, capacity: float) -> float:
    """Equivalent full cycles from discharged-energy throughput."""
    if capacity < 0:
        raise ValueError("capacity must be nonnegative")
    discharged = float(np.sum(np.maximum(np.asarray(p, dtype=float), 0.0)))
    if capacity == 0:
        if discharged > 0:
            raise ValueError("zero capacity with nonzero discharge: inconsistent sizing")
        return 0.0
    return discharged / capacity


def vrfb_cycles_per_year(p) -> int:
    """Count charge-to-discharge mode switches; idle (zero) hours are transparent."""
    s = np.sign(np.asarray(p, dtype=float))
    s = s[s != 0]
    if s.size < 2:
        return 0
    return int(np.count_nonzero((s[:-1] < 0) & (s[1:] > 0)))


def realized_lifetime(max_lifetime: float, cycle_life: float, cycles_per_year: float) -> float:
    """Years until replacement: calendar life or cycle budget, whichever ends first."""
    if max_lifetime <= 0 or cycle_life <= 0:
        raise ValueError("max_lifetime and cycle_life must be positive")
    if cycles_per_year < 0:
        raise ValueError("cycles_per_year must be nonnegative")
    if cycles_per_year == 0:
        return float(max_lifetime)
    return float(min(max_lifetime, cycle_life / cycles_per_year))


def vrfb_module_cost_per_kwh(ep_ratio, params: VrfbParams = VrfbParams(), multiplier: float = 1.0):
    """Flow-battery module cost ($/kWh) as a function of the E/P ratio (hours).

    Falls from the membrane/electrode-dominated regime at small E/P towards
    the electrolyte floor ``a - c`` at long durations. ``multiplier`` scales
    the whole module term, as in the module-cost sensitivity sweep.
    """
    ep = np.asarray(ep_ratio, dtype=float)
    if np.any(ep <= 0):
        raise ValueError("ep_ratio must be positive")
    with np.errstate(over="ignore"):
        cost = multiplier * (params.module_cost_a * np.exp(params.module_cost_b / ep) - params.module_cost_c)
    return float(cost) if cost.ndim == 0 else cost


def lib_cost_parts(capacity: float, rated_power: float, params: LibParams = LibParams(),
                   energy_multiplier: float = 1.0) -> tuple[float, float]:
    """Return the ``(energy, power)`` parts of the Li-ion capital cost in $."""
    return capacity * params.energy_cost * energy_multiplier, rated_power * params.power_cost


def lib_capital_cost(capacity: float, rated_power: float, params: LibParams = LibParams(),
                     energy_multiplier: float = 1.0) -> float:
    return sum(lib_cost_parts(capacity, rated_power, params, energy_multiplier))


def vrfb_cost_parts(capacity: float, rated_power: float, params: VrfbParams = VrfbParams(),
                    module_multiplier: float = 1.0) -> tuple[float, float]:
    """Return the ``(energy, power)`` parts of the flow-battery capital cost in $."""
    if capacity == 0 and rated_power == 0:
        return 0.0, 0.0
    if rated_power == 0:
        raise ValueError("flow battery with stored energy but no rated power")
    if capacity == 0:
        return 0.0, rated_power * (params.pcs_cost + params.bop_cost)
    module = vrfb_module_cost_per_kwh(capacity / rated_power, params, module_multiplier)
    return capacity * (module + params.candc_cost), rated_power * (params.pcs_cost + params.bop_cost)


def vrfb_capital_cost(capacity: float, rated_power: float, params: VrfbParams = VrfbParams(),
                      module_multiplier: float = 1.0) -> float:
    """Total flow-battery capital cost in $; a zero-size battery costs nothing."""
    return sum(vrfb_cost_parts(capacity, rated_power, params, module_multiplier))


def size_battery(p, kind: str, params, multiplier: float = 1.0) -> BatterySizing:
    """Size one battery from its commanded power trace and price it.

    ``kind`` is ``"lib"`` or ``"vrfb"``; ``multiplier`` scales the Li-ion
    energy cost or the flow-battery module cost respectively.
    """
    rated = size_power(p)
    capacity = size_capacity(soc_trajectory(p, params.round_trip_eff))
    if kind == "lib":
        # all throughput landing in hour 0 leaves capacity 0 under end-of-hour SOC accounting
        cycles = lib_cycles_per_year(p, capacity) if capacity > 0 else 0.0
        energy, power = lib_cost_parts(capacity, rated, params, multiplier)
    elif kind == "vrfb":
        cycles = vrfb_cycles_per_year(p)
        energy, power = vrfb_cost_parts(capacity, rated, params, multiplier)
    else:
        raise ValueError(f"unknown battery kind {kind!r}")
    life = realized_lifetime(params.max_lifetime, params.cycle_life, cycles)
    return BatterySizing(
        rated_power=rated,
        capacity=capacity,
        cycles_per_year=cycles,
        realized_lifetime=life,
        capital_cost=energy + power,
        energy_cost=energy,
        power_cost=power,
    )
