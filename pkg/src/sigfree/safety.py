"""Headway constraints on ground truth and the multi-step safety certificates.

Positions on both routes are signed distances to the conflict point
(negative while approaching), so a larger ``x`` is further ahead.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

from .controller import PairSnapshot, condition1, condition2
from .estimator import DelayedObservation
from .params import ModelParams

if TYPE_CHECKING:  # pragma: no cover
    from .sim import SimTrace

__all__ = [
    "ViolationKind",
    "SafetyViolation",
    "PairCertificate",
    "CertificateReport",
    "headway_ok",
    "condition3",
    "condition4",
    "certify_initial",
    "audit_trace",
    "audit_states",
]


class ViolationKind(str, enum.Enum):
    SAME_ROUTE = "same_route"
    CROSS_ROUTE = "cross_route"


@dataclass(frozen=True)
class SafetyViolation:
    tick: int
    route_pair: tuple[int, int]
    follower_id: int
    leader_id: int
    gap: float
    required: float
    kind: ViolationKind


def headway_ok(
    x_lead: float,
    x_follow: float,
    v_follow: float,
    same_route: bool,
    both_in_interference: bool,
    p: ModelParams,
) -> bool:
    if not same_route and not both_in_interference:
        return True
    hw = p.h if same_route else p.h_bar
    return x_lead - x_follow >= hw * v_follow


def _cert_affine(u_f_now: float, u_f_prev: float, u_l_now: float, p: ModelParams) -> float:
    d, h = p.delta, p.h
    return (1.5 * d + h) * u_f_now - (d / 2 + h) * u_f_prev - d * u_l_now


def condition3(u_f_now: float, u_f_prev: float, u_l_now: float, p: ModelParams) -> tuple[float, bool]:
    """Per-step inequality that keeps the existence test true at the next step."""
    d = p.delta
    value = _cert_affine(u_f_now, u_f_prev, u_l_now, p) + d / 2 * (p.a_max * d + p.epsilon)
    return value, value <= 0


def condition4(u_f_now: float, u_f_prev: float, u_l_now: float, p: ModelParams) -> tuple[float, bool]:
    """Per-step inequality that keeps the minimal headway attainable."""
    d, eps, th = p.delta, p.epsilon, p.theta
    value = (
        _cert_affine(u_f_now, u_f_prev, u_l_now, p)
        - 4 * eps * th
        - 1.5 * eps * d
        - 0.5 * p.a_max * d * d
    )
    return value, value <= 0


@dataclass(frozen=True)
class PairCertificate:
    follower: int  # position in the platoon, front vehicle = 0
    existence_value: float
    existence_ok: bool
    tightness_value: float
    tightness_ok: bool


@dataclass
class CertificateReport:
    """Initial-step certificate for a platoon.

    ``pairs`` holds the t=1 existence (part 1a) and tightness (part 2a)
    values per adjacent pair; ``cond3``/``cond4`` collect the per-step flags
    when a trace is certified after the fact.
    """

    pairs: list[PairCertificate] = field(default_factory=list)
    cond3: list[bool] = field(default_factory=list)
    cond4: list[bool] = field(default_factory=list)

    @property
    def existence(self) -> bool:
        return all(c.existence_ok for c in self.pairs) and all(self.cond3)

    @property
    def tightness(self) -> bool:
        return self.existence and all(c.tightness_ok for c in self.pairs) and all(self.cond4)

    @property
    def overall(self) -> bool:
        return self.tightness


def certify_initial(
    platoon: Sequence[DelayedObservation],
    u_now: Sequence[float],
    p: ModelParams,
) -> CertificateReport:
    """Evaluate the t=1 certificate on a front-to-back platoon.

    ``platoon[i].u_prev`` is the initial command ``u(0)``; ``u_now[i]`` is the
    command at t=1 (only the leaders' entries are read).

    The tightness part reuses the tightness test's value with the sign
    convention of the one-step test (holds when >= 0).
    """
    rep = CertificateReport()
    for i in range(1, len(platoon)):
        f, l = platoon[i], platoon[i - 1]
        snap = PairSnapshot(f.x_hat, l.x_hat, f.v_hat, l.v_hat, f.u_prev, l.u_prev, u_now[i - 1])
        c1, ok1 = condition1(snap, p)
        c2, ok2 = condition2(snap, p)
        rep.pairs.append(PairCertificate(i, c1, ok1, c2, ok2))
    return rep


def audit_states(
    tick: int,
    states: Sequence[tuple[int, int, float, float]],
    p: ModelParams,
) -> list[SafetyViolation]:
    """Check one tick's ground truth; ``states`` holds ``(route, id, x, v)``."""
    out: list[SafetyViolation] = []
    by_route: dict[int, list[tuple[int, int, float, float]]] = {}
    for s in states:
        by_route.setdefault(s[0], []).append(s)
    for route, vs in sorted(by_route.items()):
        vs = sorted(vs, key=lambda s: (-s[2], s[1]))
        for lead, foll in zip(vs, vs[1:]):
            if not headway_ok(lead[2], foll[2], foll[3], True, True, p):
                out.append(SafetyViolation(
                    tick, (route, route), foll[1], lead[1],
                    lead[2] - foll[2], p.h * foll[3], ViolationKind.SAME_ROUTE,
                ))
    inside = [s for s in states if abs(s[2]) <= p.big_r]
    for i, a in enumerate(inside):
        for b in inside[i + 1:]:
            if a[0] == b[0]:
                continue
            lead, foll = (a, b) if (a[2], -a[1]) >= (b[2], -b[1]) else (b, a)
            if not headway_ok(lead[2], foll[2], foll[3], False, True, p):
                out.append(SafetyViolation(
                    tick, (foll[0], lead[0]), foll[1], lead[1],
                    lead[2] - foll[2], p.h_bar * foll[3], ViolationKind.CROSS_ROUTE,
                ))
    return out


def audit_trace(trace: "SimTrace", p: ModelParams | None = None) -> list[SafetyViolation]:
    """Every headway violation in ``trace``, tick by tick."""
    p = trace.params if p is None else p
    out: list[SafetyViolation] = []
    for tick, rows in trace.by_tick():
        out.extend(audit_states(tick, [(r.route, r.vid, r.x_true, r.v_true) for r in rows], p))
    return out
