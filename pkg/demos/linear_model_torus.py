"""
Exact linear error dynamics on a torus
======================================

"""

import numpy as np

from liesync import graph, lincoord, liegroup, sim
from liesync.control import ControlConfig

rng = np.random.default_rng(3)
group = liegroup.torus(2)
G = graph.random_connected_digraph(5, rng)
rep = graph.laplacian(G)
K = graph.exact_gain_bound(rep) + 0.5

traj = sim.run(sim.Scenario(group, G, ControlConfig(1.0, K), rng.uniform(-0.5, 0.5, size=(5, 2)), steps=30))


def coords(k):
    return lincoord.stacked([liegroup.exponential_coordinates(group, E) for E in traj.errors[k]])


# propagate the stacked exponential coordinates with the linear model alongside
t = coords(0)
for k in range(1, 31):
    t = lincoord.linear_step(t, rep, K, m=2)
    if k % 10 == 0:
        print(f"step {k}: |t| = {np.linalg.norm(t):.3e}, deviation from simulator {np.abs(coords(k) - t).max():.1e}")
