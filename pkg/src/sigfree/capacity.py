"""Worst-case capacity of the intersection as a function of latency.

Every function is plain arithmetic and stays exact when fed
``fractions.Fraction`` values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, fields
from typing import Iterable, Mapping, Sequence

from .estimator import prediction_width
from .params import InvalidParam, ModelParams, validate

__all__ = [
    "CapacityRow",
    "SWEEP_AXES",
    "crossing_gap",
    "capacity_bound_generic",
    "capacity_bound",
    "sweep",
]

SWEEP_AXES = ("theta", "delta", "epsilon", "h")
WORST_CASE = "worst-case lower bound"


@dataclass(frozen=True)
class CapacityRow:
    """One sweep point.  ``bound_F`` is a worst-case (alternating-route) rate."""

    theta: float
    delta: float
    epsilon: float
    h: float
    v_max: float
    crossing_gap_D: float | None
    bound_F: float | None
    note: str = WORST_CASE

    @property
    def ok(self) -> bool:
        return self.bound_F is not None

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def crossing_gap(p: ModelParams):
    """Time the one-step position uncertainty occupies at full speed."""
    return prediction_width(p) / p.v_max


def capacity_bound_generic(D, h):
    """Crossings per second when each crossing costs ``D + h`` seconds."""
    if D < 0 or h <= 0:
        raise ValueError("need D >= 0 and h > 0")
    return 1 / (D + h)


def capacity_bound(p: ModelParams):
    return p.v_max / (2 * p.epsilon * (p.theta + p.delta) + p.h * p.v_max)


def sweep(grid: Mapping[str, Sequence[float]], p_base: ModelParams) -> list[CapacityRow]:
    """Tabulate the bound over the product of ``grid`` axes.

    Axes not given keep ``p_base``'s value.  Rows come in lexicographic order
    over (theta, delta, epsilon, h).  Points that fail validation yield a row
    with empty D/F and an ``invalid: ...`` note.  ``h_bar`` is raised to ``h``
    where needed since it does not enter the bound.
    """
    unknown = set(grid) - set(SWEEP_AXES)
    if unknown:
        raise ValueError(f"unknown sweep axes: {sorted(unknown)}")
    axes: list[Iterable[float]] = [
        list(grid[a]) if a in grid else [getattr(p_base, a)] for a in SWEEP_AXES
    ]
    rows = []
    for th, d, eps, h in itertools.product(*axes):
        try:
            p = validate(p_base.replace(theta=th, delta=d, epsilon=eps, h=h,
                                        h_bar=max(p_base.h_bar, h)))
        except InvalidParam as err:
            rows.append(CapacityRow(th, d, eps, h, p_base.v_max, None, None,
                                    f"invalid: {err.constraint}"))
            continue
        rows.append(CapacityRow(th, d, eps, h, p.v_max, crossing_gap(p), capacity_bound(p)))
    return rows
