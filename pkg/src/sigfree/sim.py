"""Closed-loop simulation of the RSU and the vehicles on both routes.

Timing.  Tick ``k`` is the decision instant ``k*delta``.  Its command
reaches the vehicle at ``k*delta + theta`` (the actuation instant), and the
report the RSU holds was taken at ``k*delta - theta``.  The simulator keeps
ground truth on the actuation grid: ``x[k], v[k]`` is the state at tick k's
actuation instant.  Between grid points the speed varies linearly and the
position follows the exact integral of that profile, so the delayed report
is the truth ``2*theta`` before the grid point.  This requires
``2*theta <= delta`` (the report must fall inside the last step).

Trace rows for tick ``k`` carry the truth at that actuation instant, the
report used at that tick and the command issued.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .controller import (
    Case,
    ControlDecision,
    PairSnapshot,
    decide,
    feasible_input_interval,
    lambda_,
)
from .dynamics import (
    NoiseKind,
    NoiseModel,
    Role,
    VehicleRecord,
    advance_position,
    clamp_target,
    realize_speed,
    speed_reachable_set,
)
from .estimator import DelayedObservation
from .params import ModelParams, validate
from .safety import audit_states, condition3, condition4

__all__ = [
    "ConfigError",
    "InitialVehicle",
    "Spawner",
    "Scenario",
    "TraceRow",
    "SimTrace",
    "validate_scenario",
    "run",
    "throughput",
    "condition3_cap",
]

ROUTES = (1, 2)
# keeps capped commands strictly inside the certificate despite rounding
_CAP_MARGIN = 1e-9


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class InitialVehicle:
    x: float
    v: float
    u_prev: float


@dataclass(frozen=True)
class Spawner:
    """Periodic arrivals at ``x = -L``: first at ``phase`` s, then every ``period`` s."""

    period: float
    speed: float
    phase: float = 0.0


@dataclass(frozen=True)
class Scenario:
    params: ModelParams
    routes: dict = field(default_factory=dict)  # route -> tuple[InitialVehicle], front first
    spawners: dict = field(default_factory=dict)  # route -> Spawner
    noise: NoiseModel = NoiseModel()
    horizon: int = 100
    seed: int = 0
    enforce_condition3: bool = False


@dataclass
class TraceRow:
    tick: int
    time_s: float
    route: int
    vid: int
    x_true: float
    v_true: float
    x_obs: float
    v_obs: float
    u_cmd: float
    decision: str
    lambda_m: float
    cond1: Optional[bool]
    cond2: Optional[bool]
    cond3: Optional[bool]
    cond4: Optional[bool]
    violation: bool = False
    u_prev: float = math.nan  # command in effect before this tick


@dataclass
class SimTrace:
    scenario: Scenario
    rows: list = field(default_factory=list)
    crossings: list = field(default_factory=list)  # (time_s, route, vid)
    retired: list = field(default_factory=list)  # (tick, route, vid)
    deferred: list = field(default_factory=list)  # (tick, route)
    violations: list = field(default_factory=list)

    @property
    def params(self) -> ModelParams:
        return self.scenario.params

    @property
    def seed(self) -> int:
        return self.scenario.seed

    def by_tick(self) -> Iterator[tuple[int, list]]:
        i, rows = 0, self.rows
        while i < len(rows):
            j = i
            while j < len(rows) and rows[j].tick == rows[i].tick:
                j += 1
            yield rows[i].tick, rows[i:j]
            i = j

    @property
    def infeasible_count(self) -> int:
        return sum(r.decision == Case.INFEASIBLE.value for r in self.rows)


def validate_scenario(sc: Scenario) -> Scenario:
    p = validate(sc.params)
    if 2 * p.theta > p.delta:
        raise ConfigError("simulation needs 2*theta <= delta")
    if int(sc.horizon) != sc.horizon or sc.horizon < 1:
        raise ConfigError("horizon must be a positive integer")
    for route, vs in sc.routes.items():
        if route not in ROUTES:
            raise ConfigError(f"unknown route {route!r}")
        for i, iv in enumerate(vs):
            if not -p.big_l <= iv.x <= p.big_l:
                raise ConfigError(f"route {route} vehicle {i}: x outside [-L, L]")
            if not (0 <= iv.v <= p.v_max and 0 <= iv.u_prev <= p.v_max):
                raise ConfigError(f"route {route} vehicle {i}: speed outside [0, v_max]")
            if abs(iv.v - iv.u_prev) > p.epsilon:
                raise ConfigError(f"route {route} vehicle {i}: |v - u_prev| exceeds epsilon")
            if i and not iv.x < vs[i - 1].x:
                raise ConfigError(f"route {route}: vehicles must be front-first with positive gaps")
    for route, sp in sc.spawners.items():
        if route not in ROUTES:
            raise ConfigError(f"unknown route {route!r}")
        if not (sp.period > 0 and 0 < sp.speed <= p.v_max and sp.phase >= 0):
            raise ConfigError(f"route {route}: bad spawner {sp}")
    return sc


def condition3_cap(u_f_prev: float, u_l_now: float, p: ModelParams) -> float:
    """Largest follower command for which the per-step certificate holds."""
    d, h = p.delta, p.h
    return ((d / 2 + h) * u_f_prev + d * u_l_now - d / 2 * (p.a_max * d + p.epsilon)) / (1.5 * d + h)


@dataclass
class _Veh:
    rec: VehicleRecord
    v_prev: float  # speed at the previous grid point


def _observe(veh: _Veh, p: ModelParams) -> tuple[float, float]:
    r = veh.rec
    frac = 2 * p.theta / p.delta
    v_hat = r.v - (r.v - veh.v_prev) * frac
    x_hat = r.x - p.theta * (v_hat + r.v)
    return x_hat, v_hat


def run(sc: Scenario) -> SimTrace:
    """Simulate ``sc.horizon`` ticks and return the full trace."""
    validate_scenario(sc)
    p = sc.params
    rng = np.random.default_rng(sc.seed) if sc.noise.kind is NoiseKind.UNIFORM else None
    trace = SimTrace(sc)
    fleet: dict[int, list[_Veh]] = {r: [] for r in ROUTES}
    next_id = 0
    for route in ROUTES:
        for iv in sc.routes.get(route, ()):
            rec = VehicleRecord(route, next_id, iv.x, iv.v, iv.u_prev, vid=next_id)
            fleet[route].append(_Veh(rec, iv.v))
            next_id += 1
    spawn_idx = {r: 0 for r in sc.spawners}
    waiting = {r: False for r in sc.spawners}

    for k in range(int(sc.horizon)):
        t = k * p.delta
        for route, sp in sorted(sc.spawners.items()):
            while True:
                due = sp.phase + spawn_idx[route] * sp.period
                if due > t + 1e-9:
                    break
                x0 = -p.big_l if waiting[route] else -p.big_l + sp.speed * max(t - due, 0.0)
                vs = fleet[route]
                if vs and vs[-1].rec.x - x0 < p.h * sp.speed:
                    trace.deferred.append((k, route))
                    waiting[route] = True
                    break
                rec = VehicleRecord(route, next_id, x0, sp.speed, sp.speed, vid=next_id)
                vs.append(_Veh(rec, sp.speed))
                next_id += 1
                spawn_idx[route] += 1
                waiting[route] = False

        states = [(v.rec.route, v.rec.vid, v.rec.x, v.rec.v) for r in ROUTES for v in fleet[r]]
        viols = audit_states(k, states, p)
        trace.violations.extend(viols)
        bad = {vi.follower_id for vi in viols}

        commands: dict[int, float] = {}
        for route in ROUTES:
            vs = fleet[route]
            vs.sort(key=lambda v: (-v.rec.x, v.rec.vid))
            prev: Optional[tuple[DelayedObservation, float]] = None
            for veh in vs:
                r = veh.rec
                x_hat, v_hat = _observe(veh, p)
                obs = DelayedObservation(x_hat, v_hat, r.u_prev, k)
                feas = feasible_input_interval(r.u_prev, p)
                c3 = c4 = None
                if prev is None:
                    u = min(p.v_max, feas.hi)
                    dec = ControlDecision(Case.FREE, u, math.nan, True, True)
                else:
                    lobs, u_l = prev
                    snap = PairSnapshot(x_hat, lobs.x_hat, v_hat, lobs.v_hat, r.u_prev, lobs.u_prev, u_l)
                    dec = decide(snap, p)
                    u = dec.u if dec.u is not None else feas.lo
                    if sc.enforce_condition3:
                        u = max(feas.lo, min(u, condition3_cap(r.u_prev, u_l, p) - _CAP_MARGIN))
                    c3 = condition3(u, r.u_prev, u_l, p)[1]
                    c4 = condition4(u, r.u_prev, u_l, p)[1]
                lam = dec.lambda_at_u
                if prev is not None and u != dec.u:
                    lam = lambda_(snap, u, p)
                trace.rows.append(TraceRow(
                    k, t, route, r.vid, r.x, r.v, x_hat, v_hat, u, dec.case.value, lam,
                    None if prev is None else dec.cond1,
                    None if prev is None else dec.cond2,
                    c3, c4, r.vid in bad, r.u_prev,
                ))
                commands[r.vid] = u
                prev = (obs, u)

        for route in ROUTES:
            vs = fleet[route]
            keep = []
            for i, veh in enumerate(vs):
                r = veh.rec
                u = commands[r.vid]
                reach = speed_reachable_set(r.v, u, p)
                role = Role.FOLLOWER if i > 0 else Role.LEADER
                v_next = realize_speed(sc.noise, reach, role, rng, clamp_target(r.v, u, p))
                x_next = advance_position(r.x, r.v, v_next, p)
                if r.x < 0 <= x_next:
                    frac = -r.x / (x_next - r.x)
                    trace.crossings.append((t + frac * p.delta, route, r.vid))
                veh.v_prev = r.v
                r.x, r.v, r.u_prev = x_next, v_next, u
                if x_next > p.big_l:
                    trace.retired.append((k + 1, route, r.vid))
                else:
                    keep.append(veh)
            fleet[route] = keep
    return trace


def throughput(trace: SimTrace, window: tuple[float, float]) -> float:
    """Conflict-point crossings per second with ``t0 <= time < t1``."""
    t0, t1 = window
    if not t1 > t0:
        raise ValueError("window must have t1 > t0")
    n = sum(1 for tc, _, _ in trace.crossings if t0 <= tc < t1)
    return n / (t1 - t0)
