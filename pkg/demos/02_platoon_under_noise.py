"""A five-vehicle platoon approaching the conflict point, three noise models.

Run: python3 demos/02_platoon_under_noise.py
"""

import numpy as np

from sigfree import P0, InitialVehicle, NoiseModel, Scenario, run
from sigfree.dynamics import NoiseKind

platoon = tuple(InitialVehicle(-100.0 - 25.0 * i, 10.0, 10.0) for i in range(5))

for kind in NoiseKind:
    sc = Scenario(P0, {1: platoon}, noise=NoiseModel(kind), horizon=400, seed=1, enforce_condition3=True)
    tr = run(sc)
    rows = [r for r in tr.rows if r.vid == 4]  # the last vehicle
    v = np.array([r.v_true for r in rows])
    print(f"{kind.value:12s} last vehicle speed {v[0]:.2f} -> {v[-1]:.2f} m/s, "
          f"violations {len(tr.violations)}, infeasible ticks {tr.infeasible_count}, "
          f"retired {len(tr.retired)}")

# adversarial noise pushes followers to the top of their speed band,
# which is what the per-step certificate has to absorb
tr = run(Scenario(P0, {1: platoon}, noise=NoiseModel(NoiseKind.ADVERSARIAL), horizon=400, enforce_condition3=True))
cmd = np.array([r.u_cmd for r in tr.rows if r.vid == 1])
real = np.array([r.v_true for r in tr.rows if r.vid == 1])
print("vehicle 1, realised minus commanded speed one step later:",
      np.round(real[1:6] - cmd[:5], 3))
