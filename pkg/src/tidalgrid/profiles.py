"""Exogenous hourly signals: demand, per-kW solar output and normalized tidal flow.

Every signal is a plain float64 ``numpy`` array of length :data:`HOURS`.
Series can be loaded from single-column CSV exports, generated synthetically
(for tests and desk-scale studies), and scaled to design parameters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

HOURS = 8760


class ProfileError(ValueError):
    """Raised for malformed or out-of-range profile data."""


@dataclass(frozen=True)
class TidalParams:
    """Periods and phase offsets (hours) of the two tidal sinusoids."""

    semidiurnal_period_h: float = 12.4
    fortnightly_period_h: float = 360.0
    semidiurnal_phase_h: float = 0.0
    fortnightly_phase_h: float = 0.0

    def __post_init__(self):
        if not (self.semidiurnal_period_h > 0 and self.fortnightly_period_h > 0):
            raise ValueError("tidal periods must be positive")


@dataclass(frozen=True)
class GeneratorSpec:
    """Installed cost and calendar life of a renewable generator."""

    unit_cost: float  # $/kW
    lifetime: float  # years
    rated_power: float = 0.0  # kW

    def __post_init__(self):
        if self.rated_power < 0 or self.unit_cost < 0:
            raise ValueError("rated_power and unit_cost must be nonnegative")
        if self.lifetime <= 0:
            raise ValueError("lifetime must be positive")


SOLAR_SPEC = GeneratorSpec(unit_cost=1060.0, lifetime=30.0)
TIDAL_SPEC = GeneratorSpec(unit_cost=4300.0, lifetime=20.0)


def as_series(values, name: str = "series") -> np.ndarray:
    """Validate ``values`` as an hourly series and return a read-only float array."""
    arr = np.array(values, dtype=float)
    if arr.shape != (HOURS,):
        raise ProfileError(f"{name}: expected {HOURS} hourly values, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ProfileError(f"{name}: contains NaN or infinite values")
    arr.flags.writeable = False
    return arr


def _half_sine(t, period, phase):
    return (np.sin(2.0 * np.pi * (t + phase) / period) + 1.0) / 2.0


def tidal_flow(t, params: TidalParams = TidalParams()):
    """Normalized tidal flow in [0, 1] at hour(s) ``t``.

    Product of a semidiurnal and a fortnightly sinusoid, each shifted and
    scaled to span [0, 1]. Accepts a scalar or an array of hours.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("hour index must be nonnegative")
    flow = _half_sine(t, params.semidiurnal_period_h, params.semidiurnal_phase_h) * _half_sine(
        t, params.fortnightly_period_h, params.fortnightly_phase_h
    )
    flow = np.clip(flow, 0.0, 1.0)
    return float(flow) if flow.ndim == 0 else flow


def tidal_generation(rated_power: float, params: TidalParams = TidalParams()) -> np.ndarray:
    """Hourly tidal output (kW): rated power delivered at peak flow."""
    if rated_power < 0:
        raise ValueError("rated_power must be nonnegative")
    return as_series(rated_power * tidal_flow(np.arange(HOURS), params), "tidal generation")


def scale_solar(unit_series, rated_power: float) -> np.ndarray:
    """Scale a per-kW solar profile to ``rated_power`` kW."""
    if rated_power < 0:
        raise ValueError("rated_power must be nonnegative")
    unit = np.asarray(unit_series, dtype=float)
    if np.any(unit < 0):
        raise ProfileError("per-kW solar profile has negative values")
    return as_series(unit * rated_power, "solar generation")


def scale_demand(series, annual_energy_gwh: float) -> np.ndarray:
    """Rescale a load shape so the year's consumption equals ``annual_energy_gwh``."""
    if annual_energy_gwh <= 0:
        raise ValueError("annual energy must be positive")
    arr = np.asarray(series, dtype=float)
    total = arr.sum()
    if not total > 0:
        raise ProfileError("cannot scale a demand series whose sum is not positive")
    return as_series(arr * (annual_energy_gwh * 1e6 / total), "demand")


def _parse_rows(path: Path) -> list[float]:
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    values = []
    for lineno, raw in enumerate(lines, start=1):
        cell = raw.strip().split(",")[0].strip()
        if cell == "" and lineno == len(lines):
            continue
        try:
            value = float(cell)
        except ValueError:
            if lineno == 1:
                continue  # header
            raise ProfileError(f"{path}: row {lineno}: cannot parse {cell!r} as a number") from None
        if not math.isfinite(value):
            raise ProfileError(f"{path}: row {lineno}: non-finite value {cell!r}")
        if value < 0:
            raise ProfileError(f"{path}: row {lineno}: negative value {value}")
        values.append(value)
    return values


def load_profile_csv(path, expected_rows: int = HOURS) -> np.ndarray:
    """Read a one-value-per-row CSV, with an optional non-numeric header line.

    Row numbers in error messages count physical lines, header included.
    """
    path = Path(path)
    values = _parse_rows(path)
    if len(values) != expected_rows:
        hint = ""
        if expected_rows == HOURS and len(values) == HOURS + 24:
            hint = " (leap year? drop the last 24 hours)"
        raise ProfileError(f"{path}: expected {expected_rows} rows, found {len(values)}{hint}")
    arr = np.array(values, dtype=float)
    return as_series(arr, str(path)) if expected_rows == HOURS else arr


def write_profile_csv(path, series, header: str | None = None) -> None:
    lines = [] if header is None else [header]
    lines.extend(repr(float(v)) for v in series)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def tile_profile(values, length: int = HOURS) -> np.ndarray:
    """Repeat a short profile periodically, truncating to ``length`` hours."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ProfileError("cannot tile an empty profile")
    reps = -(-length // values.size)
    return np.tile(values, reps)[:length]


def _day_of_year(t):
    return t / 24.0


def synth_solar(target_capacity_factor: float = 0.159, seed: int = 0) -> np.ndarray:
    """Synthetic per-kW PV output with daylength seasonality and daily cloudiness.

    The clear-sky shape is a half-sine between sunrise and sunset whose day
    length swings between 9 and 15 hours over the year. A seeded daily
    clearness factor multiplies it, then a scale factor is solved so the
    annual mean (capacity factor) hits the target after clipping at 1 kW.
    """
    if not 0 < target_capacity_factor < 0.5:
        raise ValueError("target capacity factor must lie in (0, 0.5)")
    rng = np.random.default_rng(seed)
    t = np.arange(HOURS, dtype=float)
    hour = t % 24.0 + 0.5  # mid-hour
    day = np.floor(_day_of_year(t))
    daylength = 12.0 + 3.0 * np.sin(2.0 * np.pi * (day - 80.0) / 365.0)
    sunrise = 12.0 - daylength / 2.0
    phase = (hour - sunrise) / daylength
    clear = np.where((phase > 0) & (phase < 1), np.sin(np.pi * np.clip(phase, 0, 1)), 0.0)
    clearness = rng.uniform(0.35, 1.0, size=int(day[-1]) + 1)[day.astype(int)]
    raw = clear * clearness

    def cf(scale):
        return np.clip(scale * raw, 0.0, 1.0).mean() - target_capacity_factor

    max_cf = (raw > 0).mean()
    if target_capacity_factor >= max_cf - 1e-6:
        raise ValueError(
            f"capacity factor {target_capacity_factor} unattainable; daylight fraction is {max_cf:.3f}"
        )
    hi = 1.0
    while cf(hi) < 0:
        hi *= 2.0
    scale = brentq(cf, 0.0, hi, xtol=1e-12)
    return as_series(np.clip(scale * raw, 0.0, 1.0), "synthetic solar")


# Mean daily load by month relative to the annual mean, shaped like a
# southern New England distribution zone: cooling peak in July/August,
# a smaller heating peak in January, shoulder-season troughs.
MONTHLY_LOAD_FACTORS = (1.066, 1.043, 0.958, 0.882, 0.868, 1.005,
                        1.189, 1.156, 0.976, 0.882, 0.943, 1.033)


def _seasonal_factor(day):
    mid_month = (np.arange(12) + 0.5) * 365.0 / 12.0
    xp = np.concatenate(([mid_month[-1] - 365.0], mid_month, [mid_month[0] + 365.0]))
    fp = np.concatenate(([MONTHLY_LOAD_FACTORS[-1]], MONTHLY_LOAD_FACTORS, [MONTHLY_LOAD_FACTORS[0]]))
    return np.interp(day % 365.0, xp, fp)


def synth_demand(annual_energy_gwh: float = 4.57, seed: int = 0) -> np.ndarray:
    """Synthetic island load: daily and seasonal cycles plus seeded AR(1) noise.

    Daily minimum near 05:00 and evening peak near 17:00; monthly levels
    follow :data:`MONTHLY_LOAD_FACTORS`.
    """
    if annual_energy_gwh <= 0:
        raise ValueError("annual energy must be positive")
    rng = np.random.default_rng(seed)
    t = np.arange(HOURS, dtype=float)
    hour = t % 24.0
    day = _day_of_year(t)
    daily = 0.2 * np.sin(2.0 * np.pi * (hour - 11.0) / 24.0) + 0.05 * np.sin(4.0 * np.pi * (hour - 4.0) / 24.0)
    seasonal = _seasonal_factor(day) - 1.0
    eps = rng.normal(0.0, 0.03, size=HOURS)
    noise = np.empty(HOURS)
    noise[0] = eps[0]
    for i in range(1, HOURS):
        noise[i] = 0.8 * noise[i - 1] + eps[i]
    shape = np.maximum(1.0 + daily + seasonal + noise, 0.05)
    return scale_demand(shape, annual_energy_gwh)
