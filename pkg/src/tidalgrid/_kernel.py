"""Compiled single-pass LCOE evaluation used by the optimizers.

Mirrors :func:`tidalgrid.simulate.run_year` without materializing traces.
The two are kept in agreement by the test suite.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

ROUTING_CODES = {"split": 0, "lib_only": 1, "vrfb_only": 2}
WARMUP_CODES = {"zero": 0, "truncate": 1}
N_TERMS = 7  # tidal, solar, lib_energy, lib_power, vrfb_energy, vrfb_power, backup


def pack_params(scenario) -> np.ndarray:
    m = scenario.multipliers
    lib, vrfb = scenario.lib, scenario.vrfb
    return np.array([
        scenario.tidal_spec.unit_cost * m.tidal_power,
        scenario.tidal_spec.lifetime,
        scenario.solar_spec.unit_cost * m.solar_power,
        scenario.solar_spec.lifetime,
        lib.energy_cost * m.lib_energy,
        lib.power_cost,
        lib.max_lifetime,
        lib.cycle_life,
        lib.round_trip_eff,
        vrfb.module_cost_a,
        vrfb.module_cost_b,
        vrfb.module_cost_c,
        m.vrfb_module,
        vrfb.candc_cost,
        vrfb.pcs_cost + vrfb.bop_cost,
        vrfb.max_lifetime,
        vrfb.cycle_life,
        vrfb.round_trip_eff,
        scenario.backup_rate,
        scenario.annual_delivered_mwh,
        float(ROUTING_CODES[scenario.routing]),
        float(WARMUP_CODES[scenario.warmup]),
    ])


@njit(cache=True)
def _lifetime(max_life, cycle_life, cycles):
    if cycles == 0.0:
        return max_life
    return min(max_life, cycle_life / cycles)


@njit(cache=True)
def _battery(p, eff):
    """Return rated power, capacity, discharged energy, switches and net stored change."""
    n = p.shape[0]
    w = 0.0
    wmin = math.inf
    wmax = -math.inf
    rated = 0.0
    discharged = 0.0
    switches = 0
    last = 0
    for t in range(n):
        x = p[t]
        if x > 0.0:
            w -= x
            discharged += x
            if last < 0:
                switches += 1
            last = 1
        elif x < 0.0:
            w -= x * eff
            last = -1
        ax = abs(x)
        if ax > rated:
            rated = ax
        if w < wmin:
            wmin = w
        if w > wmax:
            wmax = w
    return rated, wmax - wmin, discharged, switches, w


@njit(cache=True)
def lcoe_terms(demand, solar_unit, tidal_unit, p_tidal, p_solar, span, prm, out):
    n = demand.shape[0]
    routing = int(prm[20])
    warmup = int(prm[21])
    d = np.empty(n)
    for t in range(n):
        d[t] = demand[t] - tidal_unit[t] * p_tidal - solar_unit[t] * p_solar
    p_vrfb = np.zeros(n)
    p_lib = np.zeros(n)
    if routing == 0:
        prefix = np.empty(n + 1)
        prefix[0] = 0.0
        acc = 0.0
        for t in range(n):
            acc += d[t]
            prefix[t + 1] = acc
        whole = int(math.floor(span))
        frac = span - whole
        for t in range(n):
            lo = t - whole
            if lo < 0:
                lo = 0
            window = prefix[t] - prefix[lo]
            older = t - whole - 1
            have_older = frac > 0.0 and older >= 0
            if have_older:
                window = window + frac * d[older]
            if warmup == 0:
                p_vrfb[t] = window / span
            else:
                weight = float(min(t, whole))
                if have_older:
                    weight += frac
                p_vrfb[t] = window / weight if weight > 0.0 else 0.0
            p_lib[t] = d[t] - p_vrfb[t]
    elif routing == 1:
        for t in range(n):
            p_lib[t] = d[t]
    else:
        for t in range(n):
            p_vrfb[t] = d[t]

    lib_rated, lib_cap, lib_dis, _, lib_w = _battery(p_lib, prm[8])
    v_rated, v_cap, _, v_sw, v_w = _battery(p_vrfb, prm[17])

    lib_cycles = lib_dis / lib_cap if lib_cap > 0.0 else 0.0
    lib_life = _lifetime(prm[6], prm[7], lib_cycles)
    v_life = _lifetime(prm[15], prm[16], float(v_sw))

    lib_e = lib_cap * prm[4]
    lib_p = lib_rated * prm[5]
    if v_cap == 0.0:
        v_e = 0.0
    else:
        ep = v_cap / v_rated
        module = prm[12] * (prm[9] * math.exp(prm[10] / ep) - prm[11])
        v_e = v_cap * (module + prm[13])
    v_p = v_rated * prm[14]

    backup = -(lib_w + v_w)
    if backup < 0.0:
        backup = 0.0
    delivered = prm[19]
    costs = (p_tidal * prm[0] / prm[1], p_solar * prm[2] / prm[3], lib_e / lib_life,
             lib_p / lib_life, v_e / v_life, v_p / v_life)
    if delivered > 0.0:
        for i in range(6):
            out[i] = costs[i] / delivered
        out[6] = backup / 1000.0 * prm[18] / delivered
    else:
        total = backup
        for i in range(6):
            total += costs[i]
        for i in range(7):
            out[i] = 0.0 if total == 0.0 else math.nan


@njit(cache=True)
def lcoe_batch(demand, solar_unit, tidal_unit, designs, prm):
    """Total LCOE for each row ``(p_tidal, p_solar, span)`` of ``designs``."""
    k = designs.shape[0]
    res = np.empty(k)
    out = np.empty(N_TERMS)
    for i in range(k):
        lcoe_terms(demand, solar_unit, tidal_unit, designs[i, 0], designs[i, 1], designs[i, 2], prm, out)
        total = 0.0
        for j in range(6):
            total += out[j]
        res[i] = total + out[6]
    return res
