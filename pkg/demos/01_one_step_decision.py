"""Walk through one controller decision for a follower 20 m behind its leader.

Run: python3 demos/01_one_step_decision.py
"""

from sigfree import P0, PairSnapshot, decide, estimate_at_actuation, predict_next
from sigfree.controller import condition1, condition2, explicit_law, feasible_input_interval, lambda_
from sigfree.estimator import DelayedObservation

p = P0
print(p)

# both vehicles report 10 m/s; the reports are theta seconds old
lead = DelayedObservation(x_hat=50.0, v_hat=10.0, u_prev=10.0)
foll = DelayedObservation(x_hat=30.0, v_hat=10.0, u_prev=10.0)

# where can they be when the next command lands?
for name, obs in [("leader", lead), ("follower", foll)]:
    box = estimate_at_actuation(obs, p)
    print(f"{name:8s} at actuation: x in [{box.pos.lo:.4f}, {box.pos.hi:.4f}]  v in [{box.spd.lo}, {box.spd.hi}]")

# and one step later, if both are told to hold 10 m/s
nxt = predict_next(estimate_at_actuation(foll, p), 10.0, p)
print(f"follower one step on: x in [{nxt.pos.lo:.4f}, {nxt.pos.hi:.4f}] (width {nxt.pos.width:.4f} m)")

snap = PairSnapshot(foll.x_hat, lead.x_hat, foll.v_hat, lead.v_hat, foll.u_prev, lead.u_prev, 10.0)
feas = feasible_input_interval(foll.u_prev, p)
print("feasible commands:", (feas.lo, feas.hi))
print("surplus gap at u = 10:", round(lambda_(snap, 10.0, p), 4), "m")
print("condition 1 value:", round(condition1(snap, p)[0], 4), " condition 2 value:", round(condition2(snap, p)[0], 4))
print("unclamped root:", round(explicit_law(snap, p), 4), "m/s  (far above what one step allows)")

d = decide(snap, p)
print(f"decision: {d.case.value}, u = {d.u}, surplus {d.lambda_at_u:.4f} m")

# close the gap to 10 m and the root falls inside the feasible interval
close = PairSnapshot(30.0, 40.0, 10.0, 10.0, 10.0, 10.0, 10.0)
d = decide(close, p)
print(f"at 10 m: {d.case.value}, u = {d.u:.5f}, surplus {d.lambda_at_u:.1e} m")

# at zero gap nothing helps
d = decide(PairSnapshot(30.0, 30.0, 10.0, 10.0, 10.0, 10.0, 10.0), p)
print(f"at 0 m: {d.case.value}")
