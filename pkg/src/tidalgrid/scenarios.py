"""Ready-made scenarios: the bundled 14-day toy island and a synthetic baseline year."""
from __future__ import annotations

from importlib import resources

import numpy as np

from .profiles import load_profile_csv, scale_demand, synth_demand, synth_solar, tile_profile
from .simulate import Scenario

BASELINE_ANNUAL_GWH = 4.57
TOY_HOURS = 14 * 24


def _bundled(name: str) -> np.ndarray:
    with resources.as_file(resources.files("tidalgrid") / "data" / name) as path:
        return load_profile_csv(path, expected_rows=TOY_HOURS)


def toy_profiles() -> tuple[np.ndarray, np.ndarray]:
    """Bundled two-week demand (kW) and per-kW solar, extended periodically to a year."""
    demand = scale_demand(tile_profile(_bundled("toy_demand_14d.csv")), BASELINE_ANNUAL_GWH)
    solar = tile_profile(_bundled("toy_solar_14d.csv"))
    return demand, solar


def toy_scenario(**overrides) -> Scenario:
    """Baseline costs on the bundled two-week profiles; keyword overrides go to :class:`Scenario`."""
    demand, solar = toy_profiles()
    return Scenario(demand=demand, solar_unit=solar, **overrides)


def synthetic_baseline(seed: int = 0, **overrides) -> Scenario:
    """Baseline costs on a full synthetic year (4.57 GWh demand, 15.9% solar capacity factor)."""
    demand = synth_demand(BASELINE_ANNUAL_GWH, seed=seed)
    solar = synth_solar(0.159, seed=seed + 1)
    return Scenario(demand=demand, solar_unit=solar, **overrides)
