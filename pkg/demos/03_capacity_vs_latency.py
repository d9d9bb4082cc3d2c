"""How much crossing capacity latency costs, analytically and in simulation.

Run: python3 demos/03_capacity_vs_latency.py
"""

import numpy as np

from sigfree import P0, Scenario, Spawner, run, throughput
from sigfree.capacity import capacity_bound, crossing_gap, sweep

print(f"P0: D = {crossing_gap(P0):.4g} s, F >= {capacity_bound(P0):.5f} veh/s (ceiling 1/h = {1 / P0.h})")

# the bound barely moves with latency at these noise levels
for row in sweep({"theta": [0.0, 0.02, 0.05], "epsilon": [0.05, 0.3]}, P0):
    print(f"theta={row.theta:<5} eps={row.epsilon:<5} F={row.bound_F:.5f}")

# a very noisy setting makes the latency term visible
noisy = P0.replace(delta=1.0, a_max=3.0, epsilon=2.0)
thetas = np.array([0.0, 0.1, 0.25, 0.5])
for t in thetas:
    print(f"delta=1 eps=2 theta={t:<4} F={capacity_bound(noisy.replace(theta=float(t))):.4f}")

# alternate arrivals from the two routes, one every h + D seconds
p = P0.replace(h_bar=P0.h)
period = p.h + crossing_gap(p)
sc = Scenario(p, spawners={1: Spawner(2 * period, p.v_max), 2: Spawner(2 * period, p.v_max, period)}, horizon=1500)
tr = run(sc)
t0 = tr.crossings[0][0]
print(f"simulated: {throughput(tr, (t0, t0 + 100)):.5f} veh/s over 100 s, "
      f"{len(tr.violations)} violations, routes of first crossings {[c[1] for c in tr.crossings[:6]]}")
