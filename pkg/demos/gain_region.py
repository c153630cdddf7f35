"""
A gain that works for every graph on N vertices
===============================================

"""

from liesync import graph

# maximize |lam|^2 / (2 Re lam) over the region that holds every Laplacian
# eigenvalue, and compare with the closed form
for N in (3, 6, 9, 10, 12, 18, 19, 30):
    best = graph.region_maximum(N)
    print(f"N = {N:2d}: numerical {best.g:10.6f}  closed form {graph.kmin_closed_form(N):10.6f}  "
          f"attained by {best.label} at sigma = {best.sigma:.4f}")
