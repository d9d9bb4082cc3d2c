"""Model parameters and the regime checks every derivation relies on."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Mapping

__all__ = ["InvalidParam", "ModelParams", "validate", "PARAM_FIELDS"]


class InvalidParam(ValueError):
    """A parameter record violates one of the model's regime assumptions."""

    def __init__(self, field: str, constraint: str, value: Any = None):
        self.field = field
        self.constraint = constraint
        self.value = value
        msg = f"invalid parameter {field!r}: requires {constraint}"
        if value is not None:
            msg += f" (got {value!r})"
        super().__init__(msg)


@dataclass(frozen=True)
class ModelParams:
    """All model constants in SI units.

    delta    step length [s]
    theta    one-way latency [s]
    epsilon  speed-tracking uncertainty half-width [m/s]
    a_max    acceleration / deceleration bound [m/s^2]
    v_max    speed ceiling [m/s]
    h        same-route time headway [s]
    h_bar    cross-route time headway [s]
    big_l    neighbourhood radius [m]
    big_r    interference-region radius [m]

    Values may be floats or ``fractions.Fraction`` (the closed-form helpers
    are plain arithmetic and stay exact on rationals).
    """

    delta: float
    theta: float
    epsilon: float
    a_max: float
    v_max: float
    h: float
    h_bar: float
    big_l: float
    big_r: float

    @property
    def speed_step(self) -> float:
        """Largest speed change reachable in one step, ``a_max * delta``."""
        return self.a_max * self.delta

    def replace(self, **changes: float) -> "ModelParams":
        d = asdict(self)
        d.update(changes)
        return ModelParams(**d)

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


PARAM_FIELDS = tuple(f.name for f in fields(ModelParams))


def _check(p: ModelParams) -> None:
    for name in PARAM_FIELDS:
        val = getattr(p, name)
        try:
            finite = math.isfinite(val)
        except TypeError:
            raise InvalidParam(name, "a real number", val) from None
        if not finite:
            raise InvalidParam(name, "a finite value", val)
    if not p.delta > 0:
        raise InvalidParam("delta", "delta > 0", p.delta)
    if not 0 <= p.theta:
        raise InvalidParam("theta", "theta >= 0", p.theta)
    if not p.theta < p.delta:
        raise InvalidParam("theta", "theta < delta", p.theta)
    if not p.a_max > 0:
        raise InvalidParam("a_max", "a_max > 0", p.a_max)
    if not 0 <= p.epsilon:
        raise InvalidParam("epsilon", "epsilon >= 0", p.epsilon)
    if not p.epsilon <= p.a_max * p.delta:
        raise InvalidParam("epsilon", "epsilon <= a_max*delta", p.epsilon)
    if not p.v_max > 0:
        raise InvalidParam("v_max", "v_max > 0", p.v_max)
    if not p.h > 0:
        raise InvalidParam("h", "h > 0", p.h)
    if not p.h_bar >= p.h:
        raise InvalidParam("h_bar", "h_bar >= h", p.h_bar)
    if not p.big_r > 0:
        raise InvalidParam("big_r", "big_r > 0", p.big_r)
    if not p.big_l > p.big_r:
        raise InvalidParam("big_l", "big_l > big_r", p.big_l)


def validate(raw: ModelParams | Mapping[str, Any]) -> ModelParams:
    """Return a validated :class:`ModelParams`.

    Accepts either an existing instance (re-checked, returned unchanged) or a
    mapping with exactly the parameter names.  Raises :class:`InvalidParam`
    naming the first violated constraint.
    """
    if isinstance(raw, ModelParams):
        p = raw
    else:
        missing = [k for k in PARAM_FIELDS if k not in raw]
        if missing:
            raise InvalidParam(missing[0], "a value (missing)")
        extra = sorted(set(raw) - set(PARAM_FIELDS))
        if extra:
            raise InvalidParam(extra[0], "a known parameter name")
        p = ModelParams(**{k: raw[k] for k in PARAM_FIELDS})
    _check(p)
    return p
