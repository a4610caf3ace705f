"""
What if storage were cheaper?
=============================

Re-optimize the design as the Li-ion energy cost moves from a tenth of
its baseline to double. Each step takes the best of three seeded swarm
runs. A short sweep on the toy island keeps the run to a few minutes.
"""

from tidalgrid.optimize import PsoConfig, SearchBounds
from tidalgrid.scenarios import toy_scenario
from tidalgrid.sensitivity import SweepSpec, cost_sweep, sweep_table

spec = SweepSpec("lib_energy", multipliers=(0.1, 0.5, 1.0, 1.5, 2.0), seed=0, n_seeds=3)
rows = cost_sweep(spec, toy_scenario(), SearchBounds(), PsoConfig(swarm_size=100))

print(f"{'mult':>5s} {'LCOE':>8s} {'solar kW':>9s} {'span h':>8s} {'LIB MWh':>8s} {'VRFB MWh':>9s}")
for entry in sweep_table(rows):
    print(f"{entry['multiplier']:5.1f} {entry['lcoe_total']:8.2f} {entry['p_solar_kW']:9.0f} "
          f"{entry['span_h']:8.0f} {entry['lib_capacity_kWh'] / 1e3:8.1f} {entry['vrfb_capacity_kWh'] / 1e3:9.1f}")

# %%
# Cheaper storage can never make the optimum more expensive, so the LCOE
# column should not decrease down the table.

lcoes = [r.lcoe for r in rows]
print("non-decreasing:", all(b >= a for a, b in zip(lcoes, lcoes[1:])))
