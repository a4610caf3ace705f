"""Sizing and controls co-design of islanded tidal/solar microgrids.

Generation comes from tidal and solar plants; storage from a Li-ion battery
(fast residual) and a vanadium redox flow battery (moving-average share).
The design objective is the undiscounted levelized cost of energy.
"""
from .controller import ControllerParams, split_deficit
from .economics import ComponentCost, LcoeBreakdown, backup_penalty, lcoe
from .optimize import (
    SLICES,
    PsoConfig,
    SearchBounds,
    SliceSpec,
    grid_search,
    local_refine,
    pso,
    two_stage,
)
from .profiles import HOURS, GeneratorSpec, TidalParams
from .scenarios import synthetic_baseline, toy_scenario
from .sensitivity import SweepSpec, cost_sweep
from .simulate import CostMultipliers, DesignPoint, Scenario, SimulationResult, evaluate_many, objective, run_year
from .storage import BatterySizing, LibParams, VrfbParams

__version__ = "0.1.0"

__all__ = [
    "HOURS",
    "SLICES",
    "BatterySizing",
    "ComponentCost",
    "ControllerParams",
    "CostMultipliers",
    "DesignPoint",
    "GeneratorSpec",
    "LcoeBreakdown",
    "LibParams",
    "PsoConfig",
    "Scenario",
    "SearchBounds",
    "SimulationResult",
    "SliceSpec",
    "SweepSpec",
    "TidalParams",
    "VrfbParams",
    "backup_penalty",
    "cost_sweep",
    "evaluate_many",
    "grid_search",
    "lcoe",
    "local_refine",
    "objective",
    "pso",
    "run_year",
    "split_deficit",
    "synthetic_baseline",
    "toy_scenario",
    "two_stage",
]
