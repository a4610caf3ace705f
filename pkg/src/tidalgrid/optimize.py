"""Minimum-LCOE design search.

All three decision variables are searched in log10 space. Three tools are
provided: exhaustive 2-D grid slices, a global-best particle swarm over the
full design, and a bounded Nelder-Mead refinement. :func:`two_stage` chains
the swarm and the refinement.
"""
from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import minimize

from .simulate import ROUTINGS, DesignPoint, Scenario, SimulationResult, evaluate_many, run_year

VARIABLES = ("p_tidal", "p_solar", "span")
DISPLAY_CEILING = 100_000.0  # $/MWh, i.e. $100/kWh
SNAP_LOG_TOL = 1e-3  # decades from the lower bound that still count as "at the bound"


@dataclass(frozen=True)
class SearchBounds:
    """Natural-unit bounds for ``(p_tidal, p_solar, span)``."""

    lower: tuple[float, float, float] = (0.1, 0.1, 1.0)
    upper: tuple[float, float, float] = (1e6, 1e6, 8760.0)

    def __post_init__(self):
        if len(self.lower) != 3 or len(self.upper) != 3:
            raise ValueError("bounds need one entry per design variable")
        for name, lo, hi in zip(VARIABLES, self.lower, self.upper):
            if not 0 < lo < hi:
                raise ValueError(f"{name}: need 0 < lower < upper, got ({lo}, {hi})")
        if self.lower[2] < 1.0 or self.upper[2] > 8760.0:
            raise ValueError("span bounds must lie within [1, 8760] hours")

    @property
    def log_lower(self) -> np.ndarray:
        return np.log10(np.array(self.lower, dtype=float))

    @property
    def log_upper(self) -> np.ndarray:
        return np.log10(np.array(self.upper, dtype=float))

    def contains(self, design: DesignPoint) -> bool:
        x = design.as_tuple()
        return all(lo <= v <= hi for v, lo, hi in zip(x, self.lower, self.upper))


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 200
    max_iterations: int = 200
    inertia: float = 0.729
    cognitive: float = 1.49445
    social: float = 1.49445
    seed: int = 0
    stall_iterations: int = 20
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ValueError("swarm_size must be at least 2")
        if self.max_iterations < 1 or self.stall_iterations < 1:
            raise ValueError("iteration limits must be positive")
        if min(self.inertia, self.cognitive, self.social) <= 0:
            raise ValueError("PSO coefficients must be positive")
        if self.tolerance < 0:
            raise ValueError("tolerance must be nonnegative")


# --- batch evaluation -------------------------------------------------------

_WORKER_SCENARIO: Scenario | None = None


def _init_worker(scenario):
    global _WORKER_SCENARIO
    _WORKER_SCENARIO = scenario


def _worker_eval(chunk):
    return evaluate_many(chunk, _WORKER_SCENARIO)


class Evaluator:
    """Maps an ``(n, 3)`` array of natural-unit designs to LCOE values.

    With ``workers > 1`` rows are split into contiguous chunks evaluated in
    worker processes; the concatenated result is identical to a serial run.
    Use as a context manager to release the pool.
    """

    def __init__(self, scenario: Scenario, workers: int = 1):
        self.scenario = scenario
        self.workers = max(1, int(workers))
        self.n_evals = 0
        self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __call__(self, designs) -> np.ndarray:
        x = np.atleast_2d(np.asarray(designs, dtype=float))
        self.n_evals += x.shape[0]
        if self.workers == 1 or x.shape[0] < 2 * self.workers:
            values = evaluate_many(x, self.scenario)
        else:
            if self._pool is None:
                self._pool = ProcessPoolExecutor(self.workers, initializer=_init_worker,
                                                 initargs=(self.scenario,))
            chunks = np.array_split(x, self.workers)
            values = np.concatenate(list(self._pool.map(_worker_eval, chunks)))
        return np.where(np.isnan(values), np.inf, values)


def default_workers() -> int:
    return os.cpu_count() or 1


# --- particle swarm ---------------------------------------------------------

@dataclass
class SwarmResult:
    x: np.ndarray
    fun: float
    history: list[tuple[int, float]] = field(default_factory=list)
    n_evals: int = 0
    evaluated: list[np.ndarray] = field(default_factory=list, repr=False)


def _reflect(x, v, lo, hi):
    over = x > hi
    x = np.where(over, 2 * hi - x, x)
    v = np.where(over, -v, v)
    under = x < lo
    x = np.where(under, 2 * lo - x, x)
    v = np.where(under, -v, v)
    # a step longer than the box width can overshoot the far wall too
    return np.clip(x, lo, hi), v


def particle_swarm(func, lower, upper, config: PsoConfig = PsoConfig(), keep_positions=False) -> SwarmResult:
    """Global-best particle swarm minimizing ``func`` over a box.

    ``func`` takes an ``(n, d)`` array and returns ``n`` values. Particles
    that leave the box are reflected back with their velocity reversed.
    Iteration stops at ``max_iterations`` or when the best value improves by
    less than ``tolerance`` (relative) over ``stall_iterations`` iterations.
    """
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    rng = np.random.default_rng(config.seed)
    n, dim = config.swarm_size, lo.size
    span = hi - lo

    x = lo + rng.random((n, dim)) * span
    v = (2 * rng.random((n, dim)) - 1) * span
    f = np.asarray(func(x), dtype=float)
    f = np.where(np.isnan(f), np.inf, f)
    evaluated = [x.copy()] if keep_positions else []
    pbest_x, pbest_f = x.copy(), f.copy()
    g = int(np.argmin(pbest_f))
    gbest_x, gbest_f = pbest_x[g].copy(), float(pbest_f[g])
    history = [(0, gbest_f)]
    n_evals = n

    for it in range(1, config.max_iterations + 1):
        r1 = rng.random((n, dim))
        r2 = rng.random((n, dim))
        v = (config.inertia * v
             + config.cognitive * r1 * (pbest_x - x)
             + config.social * r2 * (gbest_x - x))
        x, v = _reflect(x + v, v, lo, hi)
        f = np.asarray(func(x), dtype=float)
        f = np.where(np.isnan(f), np.inf, f)
        n_evals += n
        if keep_positions:
            evaluated.append(x.copy())
        better = f < pbest_f
        pbest_x[better] = x[better]
        pbest_f[better] = f[better]
        g = int(np.argmin(pbest_f))
        if pbest_f[g] < gbest_f:
            gbest_x, gbest_f = pbest_x[g].copy(), float(pbest_f[g])
        history.append((it, gbest_f))
        if it >= config.stall_iterations:
            old = history[it - config.stall_iterations][1]
            if np.isfinite(old) and old - gbest_f <= config.tolerance * abs(old):
                break
    return SwarmResult(gbest_x, gbest_f, history, n_evals, evaluated)


# --- local refinement -------------------------------------------------------

def refine_box(func, x0, lower, upper, xatol=1e-7, fatol=1e-10, max_restarts=3):
    """Bounded Nelder-Mead from ``x0``; never returns a point worse than ``x0``.

    ``func`` maps a 1-D point to a scalar. The search restarts from its own
    result (fresh simplex) while that keeps improving.
    """
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if np.any(x0 < lo) or np.any(x0 > hi):
        raise ValueError("start point lies outside the bounds")

    def safe(x):
        value = float(func(np.clip(x, lo, hi)))
        return np.inf if np.isnan(value) else value

    best_x, best_f = x0.copy(), safe(x0)
    n_evals = 1
    step = 0.01 * (hi - lo)
    for _ in range(max_restarts):
        simplex = [best_x]
        for i in range(x0.size):
            p = best_x.copy()
            # step inward from whichever wall is further away
            p[i] += step[i] if best_x[i] + step[i] <= hi[i] else -step[i]
            simplex.append(p)
        res = minimize(safe, best_x, method="Nelder-Mead", bounds=list(zip(lo, hi)),
                       options={"initial_simplex": np.array(simplex), "xatol": xatol,
                                "fatol": fatol * max(1.0, abs(best_f)) if np.isfinite(best_f) else fatol,
                                "maxfev": 600 * x0.size})
        n_evals += res.nfev
        x_new = np.clip(res.x, lo, hi)
        f_new = safe(x_new)
        if not f_new < best_f:
            break
        improved = best_f - f_new
        best_x, best_f = x_new, f_new
        if improved <= fatol * max(1.0, abs(best_f)):
            break
    return best_x, best_f, n_evals


def _design_from_log(xlog) -> DesignPoint:
    p_tidal, p_solar, span = (float(v) for v in 10.0 ** np.asarray(xlog, dtype=float))
    return DesignPoint(p_tidal, p_solar, min(max(span, 1.0), 8760.0))


def local_refine(start: DesignPoint, bounds: SearchBounds, scenario: Scenario,
                 free=VARIABLES) -> DesignPoint:
    """Polish ``start`` with a bounded local search in log10 space.

    Variables not listed in ``free`` stay at their ``start`` values. The
    result is within bounds and its LCOE is no higher than that of ``start``.
    """
    if not bounds.contains(start):
        raise ValueError(f"start point {start} lies outside the search bounds")
    idx = [VARIABLES.index(v) for v in free]
    base = np.log10(np.array(start.as_tuple()))

    def func(z):
        x = base.copy()
        x[idx] = z
        return evaluate_many(10.0 ** x[None, :], scenario)[0]

    z, _, _ = refine_box(func, base[idx], bounds.log_lower[idx], bounds.log_upper[idx])
    x = base.copy()
    x[idx] = z
    return _design_from_log(x)


# --- swarm over the microgrid ----------------------------------------------

@dataclass(frozen=True, eq=False)
class OptimizationResult:
    design: DesignPoint
    lcoe: float
    result: SimulationResult | None = None
    stage1_design: DesignPoint | None = None
    stage1_lcoe: float | None = None
    history: tuple[tuple[int, float], ...] = ()
    n_evals: int = 0


def pso(bounds: SearchBounds, scenario: Scenario, config: PsoConfig = PsoConfig(),
        workers: int = 1) -> OptimizationResult:
    """Particle swarm over ``(log10 p_tidal, log10 p_solar, log10 span)``."""
    with Evaluator(scenario, workers) as ev:
        res = particle_swarm(lambda x: ev(10.0 ** x), bounds.log_lower, bounds.log_upper, config)
    return OptimizationResult(_design_from_log(res.x), res.fun, history=tuple(res.history),
                              n_evals=res.n_evals)


def snap_to_zero(design: DesignPoint, bounds: SearchBounds, scenario: Scenario,
                 rel_tol: float = 1e-9) -> DesignPoint:
    """Replace generator sizes sitting at their lower bound with exactly zero.

    Each snap is kept only if the re-simulated LCOE does not rise by more
    than ``rel_tol`` (relative). The span has no zero to snap to.
    """
    current = design
    current_f = evaluate_many([design.as_tuple()], scenario)[0]
    for i, name in enumerate(VARIABLES[:2]):
        value = getattr(current, name)
        if value > 0 and np.log10(value) - bounds.log_lower[i] <= SNAP_LOG_TOL:
            candidate = DesignPoint(**{**current.__dict__, name: 0.0})
            f = evaluate_many([candidate.as_tuple()], scenario)[0]
            if f <= current_f * (1 + rel_tol):
                current, current_f = candidate, f
    return current


def two_stage(bounds: SearchBounds, scenario: Scenario, config: PsoConfig = PsoConfig(),
              workers: int = 1) -> OptimizationResult:
    """Swarm search, then local refinement from the swarm's best, then zero snapping."""
    stage1 = pso(bounds, scenario, config, workers)
    refined = local_refine(stage1.design, bounds, scenario)
    final = snap_to_zero(refined, bounds, scenario)
    result = run_year(final, scenario)
    n_evals = stage1.n_evals  # refinement evaluations are not counted per particle
    return OptimizationResult(final, result.total_lcoe, result, stage1.design, stage1.lcoe,
                              stage1.history, n_evals)


def write_progress_csv(path, history) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iteration", "best_lcoe_usd_per_MWh"])
        for it, best in history:
            writer.writerow([it, repr(float(best))])


# --- grid slices ------------------------------------------------------------

@dataclass(frozen=True)
class SliceSpec:
    """Two free variables, fixed values for the third, and a battery routing."""

    free: tuple[str, str]
    fixed: dict = field(default_factory=dict)
    routing: str = "split"
    name: str = ""

    def __post_init__(self):
        a, b = self.free
        if a == b or a not in VARIABLES or b not in VARIABLES:
            raise ValueError(f"free variables must be two distinct names from {VARIABLES}")
        rest = set(VARIABLES) - set(self.free)
        if set(self.fixed) != rest:
            raise ValueError(f"fixed values must be given for exactly {sorted(rest)}")
        if self.routing not in ROUTINGS:
            raise ValueError(f"routing must be one of {ROUTINGS}")
        if self.routing != "split" and "span" in self.free:
            raise ValueError("span has no effect when all deficit goes to one battery")


SLICES = {
    "lib-only": SliceSpec(("p_tidal", "p_solar"), {"span": 1.0}, "lib_only", "lib-only"),
    "vrfb-only": SliceSpec(("p_tidal", "p_solar"), {"span": 1.0}, "vrfb_only", "vrfb-only"),
    "no-pv": SliceSpec(("p_tidal", "span"), {"p_solar": 0.0}, "split", "no-pv"),
    "no-tidal": SliceSpec(("p_solar", "span"), {"p_tidal": 0.0}, "split", "no-tidal"),
}


@dataclass(frozen=True, eq=False)
class GridResult:
    slice: SliceSpec
    x_values: np.ndarray  # first free variable
    y_values: np.ndarray  # second free variable
    lcoe: np.ndarray  # shape (len(x_values), len(y_values))
    best_design: DesignPoint
    best_lcoe: float
    ceiling: float = DISPLAY_CEILING

    @property
    def above_ceiling(self) -> np.ndarray:
        return self.lcoe > self.ceiling

    def rows(self):
        for i, xv in enumerate(self.x_values):
            for j, yv in enumerate(self.y_values):
                yield float(xv), float(yv), float(self.lcoe[i, j]), bool(self.lcoe[i, j] > self.ceiling)


def grid_search(spec: SliceSpec, scenario: Scenario, n_per_axis: int = 30,
                bounds: SearchBounds = SearchBounds(), ceiling: float = DISPLAY_CEILING,
                refine: bool = False, workers: int = 1) -> GridResult:
    """Evaluate the LCOE on a log-spaced grid over the slice's two free variables.

    With ``refine=True`` the best grid point seeds a local refinement over
    the free variables, which may land between grid lines.
    """
    if n_per_axis < 2:
        raise ValueError("n_per_axis must be at least 2")
    sliced = scenario.replace(routing=spec.routing) if spec.routing != scenario.routing else scenario
    ia, ib = (VARIABLES.index(v) for v in spec.free)
    axes = [np.logspace(bounds.log_lower[i], bounds.log_upper[i], n_per_axis) for i in (ia, ib)]
    xa, xb = np.meshgrid(*axes, indexing="ij")
    designs = np.empty((xa.size, 3))
    for name, value in spec.fixed.items():
        designs[:, VARIABLES.index(name)] = value
    designs[:, ia] = xa.ravel()
    designs[:, ib] = xb.ravel()
    with Evaluator(sliced, workers) as ev:
        values = ev(designs).reshape(xa.shape)
    k = int(np.argmin(values))
    best = DesignPoint(*designs[k])
    best_f = float(values.flat[k])
    if refine:
        # only the free variables move, so fixed zero powers never enter log space
        refined = _refine_slice(best, spec, bounds, sliced)
        f = evaluate_many([refined.as_tuple()], sliced)[0]
        if f <= best_f:
            best, best_f = refined, float(f)
    return GridResult(spec, axes[0], axes[1], values, best, best_f, ceiling)


def _refine_slice(start: DesignPoint, spec: SliceSpec, bounds: SearchBounds, scenario: Scenario) -> DesignPoint:
    idx = [VARIABLES.index(v) for v in spec.free]
    base = np.array(start.as_tuple(), dtype=float)

    def func(z):
        x = base.copy()
        x[idx] = 10.0 ** z
        return evaluate_many(x[None, :], scenario)[0]

    z, _, _ = refine_box(func, np.log10(base[idx]), bounds.log_lower[idx], bounds.log_upper[idx])
    x = base.copy()
    x[idx] = 10.0 ** z
    x[2] = min(max(x[2], 1.0), 8760.0)
    return DesignPoint(*x)


def write_grid_csv(path, grid: GridResult) -> None:
    a, b = grid.slice.free
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([a, b, "lcoe_usd_per_MWh", "above_ceiling"])
        for xv, yv, f, flag in grid.rows():
            writer.writerow([repr(xv), repr(yv), repr(f), int(flag)])
