"""Latency-robust coordination of connected vehicles at a signal-free intersection."""

from .params import InvalidParam, ModelParams, validate
from .dynamics import (
    Interval,
    NoiseKind,
    NoiseModel,
    Role,
    VehicleRecord,
    advance_position,
    clamp_target,
    realize_speed,
    speed_reachable_set,
)
from .estimator import (
    DelayedObservation,
    StateBox,
    estimate_at_actuation,
    predict_next,
    prediction_width,
)
from .controller import (
    Case,
    ControlDecision,
    PairSnapshot,
    condition1,
    condition2,
    coordinate_route,
    decide,
    explicit_law,
    feasible_input_interval,
    lambda_,
    lambda_oracle,
)
from .safety import (
    CertificateReport,
    SafetyViolation,
    audit_trace,
    certify_initial,
    condition3,
    condition4,
    headway_ok,
)
from .capacity import (
    CapacityRow,
    capacity_bound,
    capacity_bound_generic,
    crossing_gap,
    sweep,
)
from .sim import ConfigError, InitialVehicle, Scenario, SimTrace, Spawner, run, throughput

__version__ = "0.1.0"

P0 = ModelParams(
    delta=0.1, theta=0.02, epsilon=0.05, a_max=3.0, v_max=15.0,
    h=1.0, h_bar=2.0, big_l=300.0, big_r=30.0,
)
