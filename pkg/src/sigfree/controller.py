"""Robust speed coordination for one route.

``lambda_`` is the worst-case predicted gap surplus between a follower and
its leader one step after actuation, minus the required headway ``h*u``.  It
is affine and strictly decreasing in the follower's command, so the safe
command closest to the leader is the root of ``lambda_`` clamped into the
feasible input interval.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .dynamics import Interval
from .estimator import DelayedObservation, estimate_at_actuation, predict_next
from .params import ModelParams

__all__ = [
    "PairSnapshot",
    "Case",
    "ControlDecision",
    "LAMBDA_TOL",
    "feasible_input_interval",
    "lambda_",
    "lambda_oracle",
    "lambda_slope",
    "condition1",
    "condition2",
    "explicit_law",
    "decide",
    "coordinate_route",
]

# floating-point slack on lambda when accepting a command
LAMBDA_TOL = 1e-9


@dataclass(frozen=True)
class PairSnapshot:
    """Follower ``f`` and its leader ``l`` as the RSU sees them at one tick."""

    x_hat_f: float
    x_hat_l: float
    v_hat_f: float
    v_hat_l: float
    u_prev_f: float
    u_prev_l: float
    u_now_l: float


class Case(str, enum.Enum):
    EXPLICIT = "explicit"
    CLAMPED = "clamped_argmin"
    INFEASIBLE = "infeasible"
    FREE = "free"  # no leader on the route


@dataclass(frozen=True)
class ControlDecision:
    case: Case
    u: Optional[float]
    lambda_at_u: float
    cond1: bool
    cond2: bool
    cond1_value: float = float("nan")
    cond2_value: float = float("nan")

    @property
    def feasible(self) -> bool:
        return self.case is not Case.INFEASIBLE


def feasible_input_interval(u_prev: float, p: ModelParams) -> Interval:
    """Commands reachable from ``u_prev`` whatever the tracking error was."""
    r = p.a_max * p.delta - p.epsilon
    return Interval(u_prev - r, u_prev + r).clip(0, p.v_max)


def lambda_slope(p: ModelParams) -> float:
    return -(p.delta / 2 + p.h)


def _lambda_offset(s: PairSnapshot, p: ModelParams) -> float:
    # lambda_ = offset + slope * u
    th, d, eps = p.theta, p.delta, p.epsilon
    return (
        th * (s.v_hat_l - s.v_hat_f + s.u_prev_l - s.u_prev_f)
        - 2 * d * eps
        - 2 * th * eps
        + s.x_hat_l
        - s.x_hat_f
        + d / 2 * (s.u_prev_l - s.u_prev_f + s.u_now_l)
    )


def lambda_(s: PairSnapshot, u_cand: float, p: ModelParams) -> float:
    return _lambda_offset(s, p) - (p.delta / 2 + p.h) * u_cand


def lambda_oracle(s: PairSnapshot, u_cand: float, p: ModelParams) -> float:
    """Same quantity as :func:`lambda_`, read off the predicted boxes' endpoints."""
    lead = predict_next(
        estimate_at_actuation(DelayedObservation(s.x_hat_l, s.v_hat_l, s.u_prev_l), p, clip=False),
        s.u_now_l, p, clip=False,
    )
    foll = predict_next(
        estimate_at_actuation(DelayedObservation(s.x_hat_f, s.v_hat_f, s.u_prev_f), p, clip=False),
        u_cand, p, clip=False,
    )
    return lead.pos.lo - foll.pos.hi - p.h * u_cand


def _shared(s: PairSnapshot, p: ModelParams) -> float:
    th, d = p.theta, p.delta
    return (
        s.x_hat_f
        - s.x_hat_l
        + th * (s.v_hat_f - s.v_hat_l)
        + (th + d + p.h) * s.u_prev_f
        - (th + d / 2) * s.u_prev_l
        - d / 2 * s.u_now_l
        + 2 * p.epsilon * th
    )


def condition1(s: PairSnapshot, p: ModelParams) -> tuple[float, bool]:
    """Existence test for a safe input; holds when the value is <= 0."""
    d, eps, a, h = p.delta, p.epsilon, p.a_max, p.h
    value = _shared(s, p) + 1.5 * d * eps - 0.5 * a * d * d - h * a * d + h * eps
    return value, value <= 0


def condition2(s: PairSnapshot, p: ModelParams) -> tuple[float, bool]:
    """Tightness test (the minimal headway is attainable); holds when >= 0."""
    d, eps, a, h = p.delta, p.epsilon, p.a_max, p.h
    value = _shared(s, p) + 0.5 * d * eps + 0.5 * a * d * d + h * a * d - h * eps
    return value, value >= 0


def explicit_law(s: PairSnapshot, p: ModelParams) -> float:
    """Unclamped root of ``lambda_`` in the follower's command."""
    return _lambda_offset(s, p) / (p.delta / 2 + p.h)


def decide(s: PairSnapshot, p: ModelParams) -> ControlDecision:
    """Smallest non-negative ``lambda_`` over the feasible interval.

    The case label follows where the root sits relative to the feasible
    interval: inside it (``EXPLICIT``, lambda = 0), above it (``CLAMPED``,
    top of the interval, lambda > 0) or below it (``INFEASIBLE``: even full
    braking leaves lambda < 0).  ``cond1``/``cond2`` report the closed-form
    tests, which can disagree with the label inside a band of width
    ``delta*epsilon`` around their thresholds.
    """
    c1, ok1 = condition1(s, p)
    c2, ok2 = condition2(s, p)
    feas = feasible_input_interval(s.u_prev_f, p)
    lam_lo = lambda_(s, feas.lo, p)
    if lam_lo < -LAMBDA_TOL:
        return ControlDecision(Case.INFEASIBLE, None, lam_lo, ok1, ok2, c1, c2)
    lam_hi = lambda_(s, feas.hi, p)
    if lam_hi >= -LAMBDA_TOL:
        return ControlDecision(Case.CLAMPED, feas.hi, lam_hi, ok1, ok2, c1, c2)
    u = min(max(explicit_law(s, p), feas.lo), feas.hi)
    return ControlDecision(Case.EXPLICIT, u, lambda_(s, u, p), ok1, ok2, c1, c2)


def _free(u_prev: float, p: ModelParams) -> ControlDecision:
    u = min(p.v_max, feasible_input_interval(u_prev, p).hi)
    nan = float("nan")
    return ControlDecision(Case.FREE, u, nan, True, True, nan, nan)


def coordinate_route(
    observations: Sequence[DelayedObservation], p: ModelParams
) -> list[ControlDecision]:
    """Decide commands front-to-back along one route.

    ``observations`` must be ordered front vehicle first.  The front vehicle
    heads for ``v_max`` as fast as the feasible interval allows; each follower
    is decided against its leader's freshly issued command.  A leader whose
    decision is infeasible is assumed to brake fully (feasible lower end).
    """
    out: list[ControlDecision] = []
    prev_obs: DelayedObservation | None = None
    prev_u = 0.0
    for obs in observations:
        if prev_obs is None:
            dec = _free(obs.u_prev, p)
        else:
            snap = PairSnapshot(
                x_hat_f=obs.x_hat, x_hat_l=prev_obs.x_hat,
                v_hat_f=obs.v_hat, v_hat_l=prev_obs.v_hat,
                u_prev_f=obs.u_prev, u_prev_l=prev_obs.u_prev,
                u_now_l=prev_u,
            )
            dec = decide(snap, p)
        out.append(dec)
        prev_obs = obs
        prev_u = dec.u if dec.u is not None else feasible_input_interval(obs.u_prev, p).lo
    return out
