"""Ground-truth longitudinal kinematics.

Speeds follow the set-valued update: the vehicle heads for the commanded
target ``u`` but can change speed by at most ``a_max * delta`` per step, and
the realised speed lands anywhere within ``epsilon`` of where it was headed
(never below zero, never above ``v_max``).  Positions integrate the speed
trapezoidally over one step.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .params import ModelParams

__all__ = [
    "Interval",
    "VehicleRecord",
    "NoiseKind",
    "NoiseModel",
    "Role",
    "clamp_target",
    "speed_reachable_set",
    "advance_position",
    "realize_speed",
]


@dataclass(frozen=True)
class Interval:
    """Closed real interval ``[lo, hi]``."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @classmethod
    def around(cls, c: float, r: float) -> "Interval":
        return cls(c - r, c + r)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def center(self) -> float:
        return (self.lo + self.hi) / 2

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def subset_of(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def clip(self, lo: float, hi: float) -> "Interval":
        """Intersect with ``[lo, hi]``; collapses to the nearest bound if disjoint."""
        a = min(max(self.lo, lo), hi)
        b = max(min(self.hi, hi), lo)
        return Interval(a, b)

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def scale(self, k: float) -> "Interval":
        if k >= 0:
            return Interval(k * self.lo, k * self.hi)
        return Interval(k * self.hi, k * self.lo)

    def __iter__(self):
        yield self.lo
        yield self.hi


@dataclass
class VehicleRecord:
    """Mutable per-vehicle ground truth owned by the simulator."""

    route: int
    index: int
    x: float
    v: float
    u_prev: float
    vid: int = -1


class NoiseKind(str, enum.Enum):
    ZERO = "zero"
    UNIFORM = "uniform"
    ADVERSARIAL = "adversarial"


class Role(str, enum.Enum):
    LEADER = "leader"
    FOLLOWER = "follower"


@dataclass(frozen=True)
class NoiseModel:
    """How a realised speed is drawn from its reachable interval.

    ``ADVERSARIAL`` compresses gaps: vehicles that have a leader run at the top
    of their interval, leaderless vehicles at the bottom.
    """

    kind: NoiseKind = NoiseKind.ZERO

    @classmethod
    def parse(cls, name: str) -> "NoiseModel":
        return cls(NoiseKind(name.strip().lower()))


def clamp_target(v_prev: float, u: float, p: ModelParams) -> float:
    """Centre of the speed neighbourhood reached from ``v_prev`` aiming at ``u``."""
    step = p.a_max * p.delta
    if u < v_prev - step:
        return v_prev - step
    if u > v_prev + step:
        return v_prev + step
    return u


def speed_reachable_set(v_prev: float, u: float, p: ModelParams) -> Interval:
    c = clamp_target(v_prev, u, p)
    return Interval.around(c, p.epsilon).clip(0, p.v_max)


def advance_position(x: float, v_now: float, v_next: float, p: ModelParams) -> float:
    return x + p.delta * (v_now + v_next) / 2


def realize_speed(
    model: NoiseModel,
    reachable: Interval,
    role: Role | str,
    rng: np.random.Generator | None = None,
    nominal: float | None = None,
) -> float:
    """Pick the realised speed inside ``reachable``.

    ``ZERO`` returns ``nominal`` (the speed the vehicle was heading for) when
    given, else the interval centre; the two differ only where the interval
    was cut at 0 or ``v_max``.  ``UNIFORM`` needs a caller-owned generator.
    """
    kind = model.kind
    if kind is NoiseKind.ZERO:
        if nominal is None:
            return reachable.center
        return min(max(nominal, reachable.lo), reachable.hi)
    if kind is NoiseKind.ADVERSARIAL:
        return reachable.hi if Role(role) is Role.FOLLOWER else reachable.lo
    if rng is None:
        raise ValueError("uniform noise needs a random generator")
    if reachable.width == 0:
        return reachable.lo
    return min(float(rng.uniform(reachable.lo, reachable.hi)), reachable.hi)
