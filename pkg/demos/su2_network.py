"""
Six agents on SU(2) over a weighted directed graph
==================================================

"""

import numpy as np

from liesync import graph, lincoord, sim

sc = sim.preset("fig5_su2")

# the gain must exceed max |lam|^2 / (2 Re lam) over the Laplacian spectrum
rep = graph.laplacian(sc.graph)
print("Laplacian spectrum:", np.round(np.sort(rep.spectrum.real), 3))
print("gain bound:", graph.exact_gain_bound(rep), " K =", sc.cfg.K)
print("spectral radius of the linearized error model:", lincoord.stability_verdict(rep, sc.cfg.K).spectral_radius)

traj = sim.run(sc)
n = traj.norms()
for k in (0, 10, 25, 50, 75, 100):
    print(f"step {k:3d}: " + "  ".join(f"{v:.2e}" for v in n[k]))
print("largest membership residual:", max(traj.membership))
