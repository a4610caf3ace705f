"""Causal moving-average power split between the flow battery and the Li-ion battery.

The flow battery takes the low-frequency part of the deficit (a trailing
moving average over the previous ``span`` hours) and the Li-ion battery
covers the residual, so the two always add back to the deficit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profiles import HOURS


@dataclass(frozen=True)
class ControllerParams:
    """Moving-average span in hours (real-valued) and warm-up handling.

    ``warmup="zero"`` treats hours before the start of the year as zero
    deficit; ``warmup="truncate"`` averages only the hours available so far.
    """

    span: float
    warmup: str = "zero"

    def __post_init__(self):
        if not 1.0 <= self.span <= HOURS:
            raise ValueError(f"span must lie in [1, {HOURS}] hours, got {self.span}")
        if self.warmup not in ("zero", "truncate"):
            raise ValueError(f"unknown warmup mode {self.warmup!r}")


def moving_average(deficit, span: float, warmup: str = "zero") -> np.ndarray:
    """Trailing average of ``deficit`` over hours t-1 ... t-ceil(span).

    The ``floor(span)`` most recent hours get weight 1 and, for a fractional
    span, the next older hour gets weight ``span - floor(span)``; the sum is
    divided by ``span``. Hour t itself never enters its own average.
    """
    d = np.asarray(deficit, dtype=float)
    n = d.size
    whole = int(math.floor(span))
    frac = span - whole
    # prefix[i] = sum of d[0:i]
    prefix = np.concatenate(([0.0], np.cumsum(d)))
    t = np.arange(n)
    lo = np.maximum(t - whole, 0)
    window = prefix[t] - prefix[lo]
    if frac > 0.0:
        older = t - whole - 1
        window = window + frac * np.where(older >= 0, d[np.maximum(older, 0)], 0.0)
    if warmup == "zero":
        return window / span
    # truncated window: normalize by the weight actually present
    weight = np.minimum(t, whole) + np.where(t - whole - 1 >= 0, frac, 0.0)
    out = np.zeros(n)
    np.divide(window, weight, out=out, where=weight > 0)
    return out


def split_deficit(deficit, params: ControllerParams) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(p_vrfb, p_lib)``; positive values mean the battery discharges."""
    d = np.asarray(deficit, dtype=float)
    p_vrfb = moving_average(d, params.span, params.warmup)
    p_lib = d - p_vrfb
    return p_vrfb, p_lib
