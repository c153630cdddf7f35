"""
Principal matrix logarithm and K-th roots
=========================================

"""

import math

import numpy as np

from liesync import EigenvalueOnNegativeRealAxis, matfun
from liesync.liegroup import J, SIGMA1, SIGMA3

# a rotation by 2.5 rad: its log is 2.5 J, real because the input is real
c, s = math.cos(2.5), math.sin(2.5)
X = np.array([[c, -s], [s, c]])
print("Log(rot 2.5) =\n", matfun.principal_log(X))

# the cube root is the rotation by 2.5 / 3
print("cube root angle:", math.atan2(matfun.kth_root(X, 3)[1, 0], matfun.kth_root(X, 3)[0, 0]))

# on SU(2) the round trip exp(Log X) = X holds to rounding
U = matfun.exp_matrix(0.7 * SIGMA1 - 1.1 * SIGMA3)
print("round trip error:", np.linalg.norm(matfun.exp_matrix(matfun.principal_log(U)) - U, 2))

# a matrix with an eigenvalue on the negative real axis has no principal log
try:
    matfun.principal_log(-np.eye(2))
except EigenvalueOnNegativeRealAxis as exc:
    print("refused:", exc)

# close to the half turn the log stays accurate up to its conditioning
gap = 1e-6
c, s = math.cos(math.pi - gap), math.sin(math.pi - gap)
A = matfun.principal_log(np.array([[c, -s], [s, c]]))
print("error near the half turn:", np.abs(A - (math.pi - gap) * J).max())
