"""Conflict-free grouping of base rows into decoding layers.

Two base rows can share a layer only when their non-negative entries
touch disjoint base columns; the expanded checks of such rows write
disjoint variables and can run in parallel. Rows are grouped by greedy
first-fit in row order, which is deterministic and good enough for base
matrices with tens of rows.

Thread utilization is reported as rows-per-layer * codewords * z divided
by a reference lane budget (default 2**26 lanes).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LANE_BUDGET",
    "LayerSchedule",
    "UtilizationReport",
    "conflict_graph",
    "format_schedule",
    "greedy_schedule",
    "single_row_schedule",
    "utilization",
]

LANE_BUDGET = 67108864  # 2**26 reference lanes


@dataclass(frozen=True)
class LayerSchedule:
    """Ordered partition of base rows into layers.

    `k1` is the smallest layer size: the conservative rows-per-layer
    figure used in utilization reporting (real schedules are ragged).
    """

    layers: tuple
    k1: int = field(init=False)

    def __post_init__(self):
        layers = tuple(tuple(int(r) for r in layer) for layer in self.layers)
        if not layers:
            raise ValueError("schedule has no layers")
        if any(not layer for layer in layers):
            raise ValueError("schedule contains an empty layer")
        flat = [r for layer in layers for r in layer]
        if sorted(flat) != list(range(len(flat))):
            raise ValueError("schedule layers must partition the row indices")
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "k1", min(len(layer) for layer in layers))

    @property
    def n_rows(self):
        return sum(len(layer) for layer in self.layers)

    def __len__(self):
        return len(self.layers)


@dataclass(frozen=True)
class UtilizationReport:
    """Lane occupancy of a (rows-per-layer, batch, z) configuration."""

    k1: int
    k2: int
    z: int
    lane_budget: int = LANE_BUDGET
    utilization: float = field(init=False)
    per_layer: tuple = None

    def __post_init__(self):
        if self.k1 < 1 or self.k2 < 1 or self.z < 1 or self.lane_budget < 1:
            raise ValueError("k1, k2, z, lane_budget must all be positive")
        value = self.k1 * self.k2 * self.z / self.lane_budget
        if value > 1.0:
            raise ValueError(
                f"{self.k1}x{self.k2}x{self.z} lanes exceed the budget of {self.lane_budget}"
            )
        object.__setattr__(self, "utilization", value)


def conflict_graph(base):
    """Boolean adjacency over base rows; true where rows share a column.

    Merging two adjacent rows would give some variable node degree >= 2
    inside the layer, so they must stay in different layers.
    """
    support = (base.shifts >= 0).astype(np.int64)
    adjacency = (support @ support.T) > 0
    np.fill_diagonal(adjacency, False)
    return adjacency


def greedy_schedule(base):
    """First-fit grouping in row order.

    Each row joins the earliest layer whose rows it does not conflict
    with, else opens a new layer. Deterministic for a given matrix.
    """
    support = base.shifts >= 0
    layers = []
    used_cols = []
    for row in range(base.n_rows):
        for layer, used in zip(layers, used_cols):
            if not (used & support[row]).any():
                layer.append(row)
                used |= support[row]
                break
        else:
            layers.append([row])
            used_cols.append(support[row].copy())
    return LayerSchedule(layers=tuple(tuple(layer) for layer in layers))


def single_row_schedule(base):
    """One layer per base row, in row order (no merging)."""
    return LayerSchedule(layers=tuple((r,) for r in range(base.n_rows)))


def utilization(schedule, k2, z, lane_budget=LANE_BUDGET):
    """Utilization report for the schedule's conservative k1.

    Also breaks the figure out per layer, since merged schedules are
    usually ragged.
    """
    if k2 < 1:
        raise ValueError("codeword count must be positive")
    per_layer = tuple(len(layer) * k2 * z / lane_budget for layer in schedule.layers)
    return UtilizationReport(
        k1=schedule.k1, k2=k2, z=z, lane_budget=lane_budget, per_layer=per_layer
    )


def format_schedule(schedule):
    """Dump format: one line per layer, row indices space-separated."""
    return "\n".join(" ".join(str(r) for r in layer) for layer in schedule.layers) + "\n"
