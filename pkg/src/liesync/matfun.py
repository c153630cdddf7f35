"""Dense complex matrix functions: exponential, principal logarithm, principal
K-th root, and the spectral guards around them.

The logarithm uses inverse scaling and squaring: repeated principal square
roots (Denman-Beavers iteration) bring the argument within 0.25 of the
identity, the Mercator series finishes the job, and the result is scaled
back by ``2**s``. While some eigenvalue still has argument beyond ``pi/2``
the root is taken by the Schur method instead, since the Denman-Beavers
step cancels catastrophically for eigenvalues near -1.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import EigenvalueOnNegativeRealAxis, NonFiniteMatrix, ZeroGain

#: radius (in induced 2-norm of X - I) at which square rooting stops
SERIES_RADIUS = 0.25
SERIES_TOL = 1e-16
SQRT_TOL = 1e-14
SQRT_MAXITER = 60
MAX_SQUARE_ROOTS = 64
#: relative tolerance for calling an eigenvalue real
AXIS_REL_TOL = 1e-10
#: absolute magnitude below which an eigenvalue counts as zero
ZERO_TOL = 1e-12
REAL_RESIDUE_TOL = 1e-12
#: eigenvalue argument above which square roots use the Schur method
WIDE_ANGLE = np.pi / 2


def _as_square(X) -> np.ndarray:
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise NonFiniteMatrix("matrix has non-finite entries")
    if not np.iscomplexobj(X):
        X = X.astype(float)
    return X


def spectrum(X) -> np.ndarray:
    """Eigenvalues of `X` with algebraic multiplicity.

    Raises ``numpy.linalg.LinAlgError`` if LAPACK fails to converge.
    """
    X = _as_square(X)
    return np.linalg.eigvals(X)


def on_negative_real_axis(lam: complex) -> bool:
    """True if `lam` is (numerically) a nonpositive real number."""
    if abs(lam) <= ZERO_TOL:
        return True
    return lam.real <= 0 and abs(lam.imag) <= AXIS_REL_TOL * max(1.0, abs(lam))


def check_log_domain(X) -> None:
    """Raise :class:`EigenvalueOnNegativeRealAxis` if `X` has no principal log."""
    for lam in spectrum(X):
        if on_negative_real_axis(complex(lam)):
            raise EigenvalueOnNegativeRealAxis(complex(lam))


def exp_matrix(A) -> np.ndarray:
    """Matrix exponential of `A` (Pade scaling and squaring)."""
    A = _as_square(A)
    return scipy.linalg.expm(A)


def sqrtm_db(X, tol: float = SQRT_TOL, maxiter: int = SQRT_MAXITER) -> np.ndarray:
    """Principal square root by the product form of the Denman-Beavers iteration.

    Parameters
    ----------
    X : (n, n) array
        Matrix without eigenvalues on the closed negative real axis.
    tol : float
        Stop once ``||M_k - I||_F`` drops below this value.
    maxiter : int
        Iteration cap; exceeding it raises ``RuntimeError``.
    """
    X = _as_square(X)
    n = X.shape[0]
    eye = np.eye(n)
    M = X.copy()
    Y = X.copy()
    for _ in range(maxiter):
        Minv = np.linalg.inv(M)
        Y = 0.5 * Y @ (eye + Minv)
        M = 0.5 * (eye + 0.5 * (M + Minv))
        if np.linalg.norm(M - eye, "fro") <= tol:
            return Y
    raise RuntimeError(f"Denman-Beavers iteration did not converge in {maxiter} steps")


def sqrtm_schur(X) -> np.ndarray:
    """Principal square root by the Schur method; stable near the negative
    real axis.

    The principal root of a real matrix is real, so for real input the
    round-off imaginary part is discarded.
    """
    X = _as_square(X)
    Y = scipy.linalg.sqrtm(X)
    if isinstance(Y, tuple):
        Y = Y[0]
    if not np.iscomplexobj(X):
        Y = np.real(Y)
    return Y


def _principal_sqrt(Y) -> np.ndarray:
    if np.max(np.abs(np.angle(np.linalg.eigvals(Y)))) > WIDE_ANGLE:
        return sqrtm_schur(Y)
    return sqrtm_db(Y)


def log_series(X, tol: float = SERIES_TOL) -> np.ndarray:
    """Mercator series ``sum (-1)^(k-1) (X - I)^k / k``; needs ``||X - I|| < 1``."""
    X = _as_square(X)
    D = X - np.eye(X.shape[0])
    if np.linalg.norm(D, 2) >= 1:
        raise ValueError("series requires ||X - I|| < 1")
    out = np.zeros_like(D)
    term = np.eye(X.shape[0], dtype=D.dtype)
    k = 0
    while True:
        k += 1
        term = term @ D
        contrib = term / k
        out = out + contrib if k % 2 else out - contrib
        if np.linalg.norm(contrib, 2) < tol:
            return out


def principal_log(X) -> np.ndarray:
    """Principal matrix logarithm.

    The result is the unique logarithm whose eigenvalues have imaginary part in
    ``(-pi, pi)``. Real input gives real output.

    Raises
    ------
    EigenvalueOnNegativeRealAxis
        If any eigenvalue of `X` lies on the closed negative real axis.
    """
    X = _as_square(X)
    check_log_domain(X)
    n = X.shape[0]
    eye = np.eye(n)
    s = 0
    Y = X
    while np.linalg.norm(Y - eye, 2) >= SERIES_RADIUS:
        if s >= MAX_SQUARE_ROOTS:
            raise RuntimeError("too many square roots in inverse scaling and squaring")
        Y = _principal_sqrt(Y)
        s += 1
    A = (2.0**s) * log_series(Y)
    # complex storage of a real matrix: drop the round-off imaginary part
    if np.iscomplexobj(A) and not np.any(X.imag):
        if np.max(np.abs(A.imag)) <= REAL_RESIDUE_TOL:
            A = A.real
    return A


def kth_root(X, K: float) -> np.ndarray:
    """Principal K-th root ``exp(Log(X) / K)``; `K` may be any nonzero real."""
    if K == 0:
        raise ZeroGain()
    return exp_matrix(principal_log(X) / K)


def fractional_power(X, alpha: float) -> np.ndarray:
    """``X**alpha`` defined as ``exp(alpha * Log(X))``."""
    return exp_matrix(alpha * principal_log(X))


def log_of_power_check(X, alpha: float) -> float:
    """Residual ``||Log(X**alpha) - alpha Log(X)||``; ~0 for alpha in [-1, 1]."""
    L = principal_log(X)
    return float(np.linalg.norm(principal_log(exp_matrix(alpha * L)) - alpha * L, 2))
