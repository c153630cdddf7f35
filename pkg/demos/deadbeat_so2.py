"""
Synchronization in one step on the complete graph
=================================================

"""

from liesync import sim

# forty rotations, evenly spread over a small arc, all-to-all links, K = N
sc = sim.preset("deadbeat_so2")
traj = sim.run(sc)

for k in range(3):
    print(f"step {k}: max ||E_1j - I|| = {max(traj.err_norms[k]):.3e}")
