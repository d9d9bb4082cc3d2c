"""Set-valued state estimation across the communication latency.

The RSU sees each vehicle's state ``theta`` seconds late and its command
lands ``theta`` seconds late, so it bounds the state at actuation time from
the stale report, then propagates that box one step ahead under a candidate
command.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dynamics import Interval
from .params import ModelParams

__all__ = [
    "DelayedObservation",
    "StateBox",
    "estimate_at_actuation",
    "predict_next",
    "prediction_width",
]


@dataclass(frozen=True)
class DelayedObservation:
    x_hat: float
    v_hat: float
    u_prev: float
    tick: int = 0


@dataclass(frozen=True)
class StateBox:
    pos: Interval
    spd: Interval

    def contains(self, x: float, v: float, tol: float = 0.0) -> bool:
        return self.pos.contains(x, tol) and self.spd.contains(v, tol)


def estimate_at_actuation(
    obs: DelayedObservation, p: ModelParams, clip: bool = True
) -> StateBox:
    """Bound position and speed at the moment the next command takes effect.

    Over the ``2*theta`` window between report and actuation the speed moves
    linearly from ``v_hat`` to somewhere in ``u_prev +/- epsilon``.  With
    ``clip=False`` the raw algebraic box is returned (speed bounds may leave
    ``[0, v_max]``).
    """
    th, eps = p.theta, p.epsilon
    base = obs.x_hat + th * (obs.v_hat + obs.u_prev)
    # the position bound keeps the formula's full width even when the speed
    # bound is cut at 0 or v_max (signed positions, still sound)
    pos = Interval.around(base, th * eps)
    spd = Interval.around(obs.u_prev, eps)
    if clip:
        spd = spd.clip(0, p.v_max)
    return StateBox(pos, spd)


def predict_next(box: StateBox, u_now: float, p: ModelParams, clip: bool = True) -> StateBox:
    """Propagate ``box`` one step under a reachable command ``u_now``."""
    nxt = Interval.around(u_now, p.epsilon)
    if clip:
        nxt = nxt.clip(0, p.v_max)
    pos = box.pos + (box.spd + nxt).scale(p.delta / 2)
    return StateBox(pos, nxt)


def prediction_width(p: ModelParams) -> float:
    """Width of the one-step position prediction, ``2*epsilon*(theta+delta)``."""
    return 2 * p.epsilon * (p.theta + p.delta)
