"""Linear error model in exponential coordinates and complete-graph
performance formulas.

On a commutative group the stacked coordinates ``t = [p_11, ..., p_1N]`` of
the errors ``E_1j`` evolve exactly as

    t+ = ((I_N + (1 l_1 - L) / K) kron I_m) t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import graph as graphmod
from .errors import DeadbeatGain, Disconnected, DomainError, Unstable, ZeroGain
from .graph import LaplacianReport

STRUCTURAL_TOL = 1e-9


def _base_matrix(L, K) -> np.ndarray:
    if K == 0:
        raise ZeroGain()
    N = L.shape[0]
    return np.eye(N) + (np.outer(np.ones(N), L[0]) - L) / K


def state_matrix(rep: LaplacianReport, K: float, m: int = 1) -> np.ndarray:
    """``(I_N + (1 l_1 - L) / K) kron I_m``."""
    return np.kron(_base_matrix(rep.L, K), np.eye(m))


def stacked(coords) -> np.ndarray:
    """Flatten an (N, m) array of ``p_1j`` blocks into ``t``."""
    return np.asarray(coords, dtype=float).reshape(-1)


def linear_step(t, rep: LaplacianReport, K: float, m: int = 1) -> np.ndarray:
    """One step of the linear model; the ``p_11`` block stays at zero."""
    t = np.asarray(t, dtype=float).reshape(-1)
    return state_matrix(rep, K, m) @ t


@dataclass(frozen=True)
class SpectralReport:
    """Eigen-analysis of the linear error model for one gain."""

    K: float
    eigenvalues: np.ndarray
    restricted_eigenvalues: np.ndarray
    spectral_radius: float
    stable: bool
    laplacian_spectrum: np.ndarray

    def to_dict(self) -> dict:
        def pairs(z):
            return [[float(v.real), float(v.imag)] for v in np.asarray(z, dtype=complex)]

        return {
            "K": self.K,
            "laplacian_spectrum": pairs(self.laplacian_spectrum),
            "eigenvalues": pairs(self.eigenvalues),
            "restricted_eigenvalues": pairs(self.restricted_eigenvalues),
            "spectral_radius": self.spectral_radius,
            "stable": self.stable,
        }


def restricted_matrix(rep: LaplacianReport, K: float, m: int = 1) -> np.ndarray:
    """State matrix restricted to the invariant subspace ``p_11 = 0``.

    The first block row must be the identity (``p_11`` never moves); that
    block row and column are then deleted.
    """
    A = state_matrix(rep, K, m)
    top = A[:m]
    expected = np.zeros_like(top)
    expected[:, :m] = np.eye(m)
    if np.max(np.abs(top - expected)) > STRUCTURAL_TOL:
        raise DomainError("first block row of the state matrix is not the identity")
    return A[m:, m:]


def stability_verdict(rep: LaplacianReport, K: float, m: int = 1) -> SpectralReport:
    """Schur test of the linear model on the subspace ``p_11 = 0``.

    Raises
    ------
    Disconnected
        If the Laplacian's zero eigenvalue is not simple.
    """
    if not rep.connected:
        raise Disconnected("Laplacian zero eigenvalue is not simple")
    full = np.linalg.eigvals(state_matrix(rep, K, m))
    restricted = np.linalg.eigvals(restricted_matrix(rep, K, m))
    rho = float(np.max(np.abs(restricted))) if restricted.size else 0.0
    return SpectralReport(
        K=float(K),
        eigenvalues=full,
        restricted_eigenvalues=restricted,
        spectral_radius=rho,
        stable=rho < 1.0,
        laplacian_spectrum=rep.spectrum,
    )


def mapped_eigenvalues(rep: LaplacianReport, K: float) -> np.ndarray:
    """``1 - lam / K`` over the Laplacian spectrum."""
    return 1.0 - rep.spectrum / K


# --- complete graph performance ------------------------------------------


def complete_exponent(N: int, K: float) -> float:
    """Per-step power ``(K - N) / K`` of every error on the complete graph."""
    if K == 0:
        raise ZeroGain()
    return (K - N) / K


def settling_time_real(N: int, K: float, eps: float) -> float:
    """Un-ceiled ``log(eps) / log(|K - N| / K)``."""
    if K == 0:
        raise ZeroGain()
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    if K == N:
        raise DeadbeatGain("K == N: synchronization in one step")
    ratio = abs(K - N) / K
    if not 0 < ratio < 1:
        raise Unstable(f"|K - N| / K = {ratio:.6g} is not in (0, 1)")
    return math.log(eps) / math.log(ratio)


def settling_time(N: int, K: float, eps: float) -> int:
    """Epsilon settling time of the unweighted complete graph.

    Raises :class:`DeadbeatGain` for ``K == N`` (settling time 1) and
    :class:`Unstable` when ``|K - N| / K >= 1``.
    """
    return int(math.ceil(settling_time_real(N, K, eps)))


def settling_time_derivative(N: int, K: float, eps: float) -> float:
    """d(settling time)/dK of the un-ceiled expression."""
    if K == 0:
        raise ZeroGain()
    if K == N:
        raise DomainError("derivative is singular at K == N")
    lr = math.log(abs(K - N) / K)
    return math.log(eps) * N * (N - K) / (K * abs(K - N) ** 2 * lr**2)


def complete_graph_report(N: int, K: float | None = None):
    rep = graphmod.laplacian(graphmod.CommGraph.complete(N))
    return rep if K is None else stability_verdict(rep, K)
