"""Undiscounted levelized cost of energy and its per-component breakdown."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_BACKUP_RATE = 10_000.0  # $/MWh


@dataclass(frozen=True)
class ComponentCost:
    name: str
    capital_cost: float  # $
    realized_lifetime: float  # years

    def __post_init__(self):
        if self.capital_cost < 0:
            raise ValueError(f"{self.name}: capital cost must be nonnegative")
        if not self.realized_lifetime > 0:
            raise ValueError(f"{self.name}: realized lifetime must be positive")

    @property
    def annualized(self) -> float:
        return self.capital_cost / self.realized_lifetime


@dataclass(frozen=True)
class LcoeBreakdown:
    """Per-component LCOE contributions in $/MWh delivered.

    ``contributions`` preserves insertion order; the backup penalty is kept
    separately and included in ``total``.
    """

    contributions: dict[str, float] = field(default_factory=dict)
    backup: float = 0.0

    @property
    def total(self) -> float:
        return sum(self.contributions.values()) + self.backup

    def as_rows(self) -> list[tuple[str, float]]:
        rows = list(self.contributions.items())
        if self.backup > 0:
            rows.append(("backup", self.backup))
        return rows


def lcoe(components, delivered_energy: float, backup: float = 0.0) -> LcoeBreakdown:
    """Sum of annualized capital costs over annual delivered energy (MWh/yr).

    Each component contributes ``capital / lifetime / delivered``; zero-cost
    components are left out of the breakdown. ``backup`` is an already
    normalized penalty in $/MWh (see :func:`backup_penalty`).
    """
    if not delivered_energy > 0:
        raise ValueError("delivered energy must be positive")
    contributions: dict[str, float] = {}
    for comp in components:
        if comp.capital_cost == 0:
            continue
        contributions[comp.name] = contributions.get(comp.name, 0.0) + comp.annualized / delivered_energy
    return LcoeBreakdown(contributions, backup)


def backup_penalty(shortfall: float, rate: float, delivered_energy: float) -> float:
    """Cost of last-resort generation (shortfall MWh at ``rate`` $/MWh) per MWh delivered."""
    if shortfall < 0 or rate < 0:
        raise ValueError("shortfall and rate must be nonnegative")
    if not delivered_energy > 0:
        raise ValueError("delivered energy must be positive")
    return shortfall * rate / delivered_energy


def write_breakdown_csv(path, breakdown: LcoeBreakdown) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["component", "lcoe_usd_per_MWh"])
        for name, value in breakdown.as_rows():
            writer.writerow([name, repr(float(value))])
        writer.writerow(["total", repr(float(breakdown.total))])
