"""
Settling time on the complete graph
===================================

"""

import numpy as np

from liesync import lincoord, liegroup, sim
from liesync.control import ControlConfig
from liesync.graph import CommGraph

N, eps = 6, 0.01
rng = np.random.default_rng(0)
theta = rng.uniform(-0.2, 0.2, size=N)

# every error is raised to (K - N)/K per step; the closer K is to N the faster
for K in (3.5, 4.5, 6.0, 9.0, 15.0):
    traj = sim.run(sim.Scenario(liegroup.SO2, CommGraph.complete(N), ControlConfig(1.0, K), theta[:, None],
                                steps=60))
    if K == N:
        print(f"K = {K}: deadbeat")
        continue
    print(f"K = {K:4}: predicted {lincoord.settling_time(N, K, eps):3d}  measured {sim.measure_settling(traj, eps)}")
