"""Scenario files and CSV export.

Scenario files are INI-style text::

    [params]
    delta = 0.1
    theta = 0.02
    epsilon = 0.05
    a_max = 3
    v_max = 15
    h = 1
    h_bar = 2
    big_l = 300
    big_r = 30

    [run]
    horizon = 200
    seed = 7
    noise = zero            ; zero | uniform | adversarial
    enforce_condition3 = no
    window = 0, 20          ; optional throughput window [s]

    [route 1]
    ; one "x, v, u_prev" triple per line, front vehicle first
    vehicles =
        50, 10, 10
        30, 10, 10

    [spawner 2]
    period = 2.0016
    speed = 15
    phase = 1.0008

    [sweep]
    theta = 0, 0.02, 0.05

Every section except ``[params]`` is optional.
"""

from __future__ import annotations

import configparser
import csv
import io
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .capacity import SWEEP_AXES, CapacityRow
from .dynamics import NoiseKind, NoiseModel
from .params import PARAM_FIELDS, validate
from .sim import ROUTES, InitialVehicle, Scenario, SimTrace, Spawner, validate_scenario

__all__ = [
    "ParseError",
    "Config",
    "load_config",
    "parse_config",
    "parse_scenario",
    "serialize_scenario",
    "TRACE_COLUMNS",
    "trace_to_csv",
    "sweep_to_csv",
]

TRACE_COLUMNS = (
    "tick", "time_s", "route", "vehicle_id", "x_true_m", "v_true_mps", "x_obs_m",
    "v_obs_mps", "u_cmd_mps", "decision", "lambda_m", "cond1", "cond2", "cond3",
    "cond4", "violation",
)

_ROUTE_RE = re.compile(r"^route\s+(\d+)$")
_SPAWNER_RE = re.compile(r"^spawner\s+(\d+)$")


class ParseError(ValueError):
    def __init__(self, msg: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)


@dataclass(frozen=True)
class Config:
    scenario: Scenario
    window: Optional[tuple[float, float]] = None
    sweep: dict = field(default_factory=dict)


def _line_of(text: str, section: str, key: Optional[str] = None) -> Optional[int]:
    cur = None
    for n, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if s.startswith("[") and s.endswith("]"):
            cur = s[1:-1].strip()
            if key is None and cur == section:
                return n
            continue
        if cur == section and key is not None:
            m = re.match(r"([^=:]+)[=:]", s)
            if m and m.group(1).strip().lower() == key:
                return n
    return None


def _num(text: str, section: str, key: str, raw: str) -> float:
    try:
        val = float(raw)
    except ValueError:
        raise ParseError(f"not a number: {raw!r}", key, _line_of(text, section, key)) from None
    if not math.isfinite(val):
        raise ParseError(f"not finite: {raw!r}", key, _line_of(text, section, key))
    return val


def _nums(text: str, section: str, key: str, raw: str) -> list[float]:
    parts = [s for s in re.split(r"[,\s]+", raw.strip()) if s]
    return [_num(text, section, key, s) for s in parts]


def parse_config(text: str) -> Config:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as err:
        raise ParseError(str(err).splitlines()[0], line=getattr(err, "lineno", None)) from None

    if not cp.has_section("params"):
        raise ParseError("missing [params] section")
    sec = cp["params"]
    raw = {}
    for key in PARAM_FIELDS:
        if key not in sec:
            raise ParseError("missing required key", key, _line_of(text, "params"))
        raw[key] = _num(text, "params", key, sec[key])
    for key in sec:
        if key not in PARAM_FIELDS:
            raise ParseError("unknown key", key, _line_of(text, "params", key))
    params = validate(raw)

    horizon, seed, noise, enforce, window = 100, 0, NoiseModel(), False, None
    if cp.has_section("run"):
        run = cp["run"]
        try:
            if "horizon" in run:
                horizon = run.getint("horizon")
            if "seed" in run:
                seed = run.getint("seed")
            if "enforce_condition3" in run:
                enforce = run.getboolean("enforce_condition3")
        except ValueError as err:
            raise ParseError(str(err), line=_line_of(text, "run")) from None
        if "noise" in run:
            try:
                noise = NoiseModel.parse(run["noise"])
            except ValueError:
                raise ParseError(
                    f"unknown noise {run['noise']!r}", "noise", _line_of(text, "run", "noise")
                ) from None
        if "window" in run:
            w = _nums(text, "run", "window", run["window"])
            if len(w) != 2:
                raise ParseError("expected 't0, t1'", "window", _line_of(text, "run", "window"))
            window = (w[0], w[1])

    routes: dict[int, tuple[InitialVehicle, ...]] = {}
    spawners: dict[int, Spawner] = {}
    sweep: dict[str, list[float]] = {}
    for name in cp.sections():
        m_route, m_spawn = _ROUTE_RE.match(name), _SPAWNER_RE.match(name)
        if m_route:
            route = int(m_route.group(1))
            body = cp[name].get("vehicles", "")
            vs = []
            for line in body.strip().splitlines():
                if not line.strip():
                    continue
                vals = _nums(text, name, "vehicles", line)
                if len(vals) != 3:
                    raise ParseError(f"expected 'x, v, u_prev', got {line.strip()!r}",
                                     "vehicles", _line_of(text, name, "vehicles"))
                vs.append(InitialVehicle(*vals))
            routes[route] = tuple(vs)
        elif m_spawn:
            route = int(m_spawn.group(1))
            s = cp[name]
            for key in ("period", "speed"):
                if key not in s:
                    raise ParseError("missing required key", key, _line_of(text, name))
            spawners[route] = Spawner(
                _num(text, name, "period", s["period"]),
                _num(text, name, "speed", s["speed"]),
                _num(text, name, "phase", s.get("phase", "0")),
            )
        elif name == "sweep":
            for key in cp[name]:
                if key not in SWEEP_AXES:
                    raise ParseError("unknown sweep axis", key, _line_of(text, name, key))
                sweep[key] = _nums(text, name, key, cp[name][key])
        elif name not in ("params", "run"):
            raise ParseError(f"unknown section [{name}]", line=_line_of(text, name))
    for r in list(routes) + list(spawners):
        if r not in ROUTES:
            raise ParseError(f"route must be one of {ROUTES}, got {r}")

    sc = Scenario(params, routes, spawners, noise, horizon, seed, enforce)
    validate_scenario(sc)
    return Config(sc, window, sweep)


def load_config(path: str | Path) -> Config:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def parse_scenario(path: str | Path) -> Scenario:
    return load_config(path).scenario


def serialize_scenario(sc: Scenario, window=None, sweep=None) -> str:
    """Render ``sc`` in the scenario-file format; floats are written exactly."""
    out = ["[params]"]
    out += [f"{k} = {float(getattr(sc.params, k))!r}" for k in PARAM_FIELDS]
    out += ["", "[run]", f"horizon = {int(sc.horizon)}", f"seed = {int(sc.seed)}",
            f"noise = {sc.noise.kind.value}",
            f"enforce_condition3 = {'yes' if sc.enforce_condition3 else 'no'}"]
    if window is not None:
        out.append(f"window = {float(window[0])!r}, {float(window[1])!r}")
    for route in sorted(sc.routes):
        out += ["", f"[route {route}]", "vehicles ="]
        out += [f"    {iv.x!r}, {iv.v!r}, {iv.u_prev!r}" for iv in sc.routes[route]]
    for route in sorted(sc.spawners):
        sp = sc.spawners[route]
        out += ["", f"[spawner {route}]", f"period = {sp.period!r}",
                f"speed = {sp.speed!r}", f"phase = {sp.phase!r}"]
    if sweep:
        out += ["", "[sweep]"]
        out += [f"{k} = {', '.join(repr(float(v)) for v in sweep[k])}" for k in SWEEP_AXES if k in sweep]
    return "\n".join(out) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def _csv(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def trace_to_csv(trace: SimTrace) -> str:
    return _csv(TRACE_COLUMNS, (
        (r.tick, r.time_s, r.route, r.vid, r.x_true, r.v_true, r.x_obs, r.v_obs, r.u_cmd,
         r.decision, r.lambda_m, r.cond1, r.cond2, r.cond3, r.cond4, r.violation)
        for r in trace.rows
    ))


def sweep_to_csv(rows: Iterable[CapacityRow]) -> str:
    cols = CapacityRow.columns()
    return _csv(cols, ([getattr(r, c) for c in cols] for r in rows))
