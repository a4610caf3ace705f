"""Scenario files: INI sections mirroring :class:`~tidalgrid.simulate.Scenario`.

Every key is optional and defaults to the baseline study, so an empty file
gives baseline costs on synthetic profiles. Recognized sections and keys::

    [demand]      csv | synth_annual_gwh | toy ; annual_energy_gwh
    [solar]       csv | synth_capacity_factor | toy ; unit_cost, lifetime
    [tidal]       semidiurnal_period_h, fortnightly_period_h,
                  semidiurnal_phase_h, fortnightly_phase_h, unit_cost, lifetime
    [lib]         energy_cost, power_cost, max_lifetime, cycle_life, round_trip_eff
    [vrfb]        module_cost_a, module_cost_b, module_cost_c, candc_cost,
                  pcs_cost, bop_cost, max_lifetime, cycle_life, round_trip_eff
    [economics]   backup_rate, delivered_energy_mwh
    [multipliers] lib_energy, vrfb_module, solar_power, tidal_power
    [controller]  warmup (zero | truncate)
    [bounds]      p_tidal_min, p_tidal_max, p_solar_min, p_solar_max, span_min, span_max

Relative CSV paths resolve against the scenario file's directory.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, fields
from pathlib import Path

from . import profiles
from .optimize import SearchBounds
from .scenarios import BASELINE_ANNUAL_GWH, toy_profiles
from .simulate import CostMultipliers, Scenario
from .storage import LibParams, VrfbParams

SECTIONS = ("demand", "solar", "tidal", "lib", "vrfb", "economics", "multipliers", "controller", "bounds")
SOURCE_KEYS = {"demand": ("csv", "synth_annual_gwh", "toy"), "solar": ("csv", "synth_capacity_factor", "toy")}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ProfileSource:
    kind: str  # "csv", "synth" or "toy"
    value: object = None


def _floats(section, cls, allowed=None):
    names = {f.name for f in fields(cls) if f.init}
    out = {}
    for key, raw in section.items():
        if key in names and (allowed is None or key in allowed):
            try:
                out[key] = float(raw)
            except ValueError:
                raise ConfigError(f"[{section.name}] {key}: not a number: {raw!r}") from None
    return out


def read_config(path) -> configparser.ConfigParser:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"scenario file not found: {path}")
    cp = configparser.ConfigParser()
    try:
        cp.read_string(path.read_text(encoding="utf-8"), source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    unknown = set(cp.sections()) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"{path}: unknown section(s) {sorted(unknown)}")
    return cp


def profile_source(cp, name: str, base_dir: Path) -> ProfileSource | None:
    if not cp.has_section(name):
        return None
    sec = cp[name]
    given = [k for k in SOURCE_KEYS[name] if k in sec]
    if len(given) > 1:
        raise ConfigError(f"[{name}] specifies more than one source: {given}")
    if not given:
        return None
    key = given[0]
    if key == "csv":
        path = Path(sec["csv"])
        return ProfileSource("csv", path if path.is_absolute() else base_dir / path)
    if key == "toy":
        return ProfileSource("toy") if sec.getboolean("toy") else None
    return ProfileSource("synth", sec.getfloat(key))


def build_scenario(cp, demand_src: ProfileSource, solar_src: ProfileSource, seed: int = 0) -> Scenario:
    def section(name):
        return cp[name] if cp.has_section(name) else {}

    annual = float(section("demand").get("annual_energy_gwh", BASELINE_ANNUAL_GWH))
    if demand_src.kind == "csv":
        demand = profiles.scale_demand(profiles.load_profile_csv(demand_src.value), annual)
    elif demand_src.kind == "toy":
        demand = profiles.scale_demand(toy_profiles()[0], annual)
    else:
        demand = profiles.synth_demand(demand_src.value, seed=seed)

    if solar_src.kind == "csv":
        solar = profiles.load_profile_csv(solar_src.value)
    elif solar_src.kind == "toy":
        solar = toy_profiles()[1]
    else:
        solar = profiles.synth_solar(solar_src.value, seed=seed + 1)

    tidal_sec = section("tidal")
    solar_sec = section("solar")
    gen_keys = ("unit_cost", "lifetime")
    econ = section("economics")
    delivered = econ.get("delivered_energy_mwh")
    controller = section("controller")
    try:
        return Scenario(
            demand=demand,
            solar_unit=solar,
            tidal=profiles.TidalParams(**_floats(tidal_sec, profiles.TidalParams)) if tidal_sec else profiles.TidalParams(),
            lib=LibParams(**_floats(section("lib"), LibParams)) if section("lib") else LibParams(),
            vrfb=VrfbParams(**_floats(section("vrfb"), VrfbParams)) if section("vrfb") else VrfbParams(),
            solar_spec=profiles.GeneratorSpec(**{**vars(profiles.SOLAR_SPEC), **_floats(solar_sec, profiles.GeneratorSpec, gen_keys)}),
            tidal_spec=profiles.GeneratorSpec(**{**vars(profiles.TIDAL_SPEC), **_floats(tidal_sec, profiles.GeneratorSpec, gen_keys)}),
            delivered_energy=None if delivered is None else float(delivered),
            backup_rate=float(econ.get("backup_rate", Scenario.backup_rate)),
            multipliers=CostMultipliers(**_floats(section("multipliers"), CostMultipliers)),
            warmup=controller.get("warmup", "zero"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def build_bounds(cp) -> SearchBounds:
    if not cp.has_section("bounds"):
        return SearchBounds()
    sec = cp["bounds"]
    default = SearchBounds()
    lower, upper = list(default.lower), list(default.upper)
    for i, name in enumerate(("p_tidal", "p_solar", "span")):
        lower[i] = sec.getfloat(f"{name}_min", lower[i])
        upper[i] = sec.getfloat(f"{name}_max", upper[i])
    try:
        return SearchBounds(tuple(lower), tuple(upper))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
