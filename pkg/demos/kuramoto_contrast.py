"""
Sampled Kuramoto coupling against the logarithmic controller
============================================================

"""

from liesync import sim

# the naive sample-and-hold Kuramoto update works for a short period
fast = sim.run(sim.preset("fig2_kuramoto_T01"))
print("T = 0.1, spread after 200 steps:", sim.phase_spread(fast.phases()[-1]))

# but not for a long one: the phases keep oscillating
slow = sim.run(sim.preset("fig3_kuramoto_T08"))
print("T = 0.8, spread after 200 steps:", sim.phase_spread(slow.phases()[-1]))

# the logarithmic controller with K = 2 converges at the same long period
prop = sim.run(sim.preset("fig4_kuramoto_proposed"))
for k in (0, 5, 10, 20, 50):
    print(f"proposed, step {k}: max ||E_1j - I|| = {max(prop.err_norms[k]):.3e}")
