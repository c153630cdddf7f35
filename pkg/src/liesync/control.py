"""Distributed matrix-logarithm controller and the exact sampled closed loop.

Agent ``i`` forms ``P_i = prod_{j in N_i} E_ij ** w_ij`` (ascending ``j``) from
its relative errors ``E_ij = X_i^{-1} X_j`` and applies

    Omega_i = Log(P_i ** (1/K)) / T,

which under zero-order hold gives ``X_i+ = X_i P_i ** (1/K)`` exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import graph as graphmod
from . import liegroup, matfun
from .errors import (
    ControllerUndefined,
    DomainError,
    EigenvalueOnNegativeRealAxis,
    OutsideLogNeighbourhood,
    ZeroGain,
)
from .graph import CommGraph


@dataclass(frozen=True)
class ControlConfig:
    """Sampling period `T` (seconds) and gain `K` shared by all agents."""

    T: float
    K: float

    def __post_init__(self):
        if not self.T > 0:
            raise DomainError("sampling period T must be positive")
        if self.K == 0:
            raise ZeroGain()


def check_gain(G: CommGraph, K: float) -> bool:
    """Warn if `K` does not exceed the exact spectral bound for `G`.

    Returns True when the bound is met. Gains below the bound are allowed on
    purpose, since instability is itself worth simulating.
    """
    rep = graphmod.laplacian(G)
    if not rep.connected:
        warnings.warn("communication graph is not connected", RuntimeWarning, stacklevel=2)
        return False
    bound = graphmod.exact_gain_bound(rep)
    if not K > bound:
        warnings.warn(
            f"gain K={K} does not exceed the spectral bound {bound:.6g}; expect instability",
            RuntimeWarning,
            stacklevel=2,
        )
        return False
    return True


def relative_error(Xi, Xj) -> np.ndarray:
    """Left-invariant error ``Xi^{-1} Xj``."""
    return np.linalg.solve(Xi, Xj)


def weighted_power(E, w: float) -> np.ndarray:
    """``E ** w = exp(w Log E)``; exact shortcut for ``w == 1``."""
    if w == 1.0:
        return np.asarray(E)
    return matfun.exp_matrix(w * matfun.principal_log(E))


def neighbour_product(i: int, states, G: CommGraph, order=None) -> np.ndarray:
    """``prod_{j in N_i} E_ij ** w_ij``; identity for an isolated agent.

    `order` overrides the default ascending neighbour order.
    """
    Xi = states[i]
    P = np.eye(Xi.shape[0], dtype=np.result_type(Xi, float))
    nbrs = G.neighbours(i) if order is None else list(order)
    for j in nbrs:
        Eij = relative_error(Xi, states[j])
        try:
            P = P @ weighted_power(Eij, G.weights[i, j])
        except EigenvalueOnNegativeRealAxis as exc:
            raise ControllerUndefined(i, eigenvalue=exc.eigenvalue) from exc
    return P


def agent_root(i: int, states, G: CommGraph, cfg: ControlConfig, order=None) -> np.ndarray:
    """``P_i ** (1/K)``, the factor agent `i` applies over one period."""
    P = neighbour_product(i, states, G, order)
    try:
        return matfun.kth_root(P, cfg.K)
    except EigenvalueOnNegativeRealAxis as exc:
        raise ControllerUndefined(i, eigenvalue=exc.eigenvalue) from exc


def controller(i: int, states, G: CommGraph, cfg: ControlConfig, order=None) -> np.ndarray:
    """Control input ``Omega_i`` (an element of the Lie algebra).

    Only ``E_ij`` for neighbours ``j`` of ``i`` are read.

    Raises
    ------
    ControllerUndefined
        When the neighbour product, or its K-th root, has an eigenvalue on
        the closed negative real axis.
    """
    P = neighbour_product(i, states, G, order)
    try:
        A = matfun.principal_log(P) / cfg.K
        if abs(cfg.K) < 1:
            # Log P / K may leave the strip; take the principal log of the root
            A = matfun.principal_log(matfun.exp_matrix(A))
    except EigenvalueOnNegativeRealAxis as exc:
        raise ControllerUndefined(i, eigenvalue=exc.eigenvalue) from exc
    return A / cfg.T


def controls(states, G: CommGraph, cfg: ControlConfig) -> list[np.ndarray]:
    """All control inputs, computed from one snapshot of the states."""
    return [controller(i, states, G, cfg) for i in range(len(states))]


def closed_loop_step(states, G: CommGraph, cfg: ControlConfig) -> list[np.ndarray]:
    """Synchronous update ``X_i+ = X_i P_i ** (1/K)``.

    Every root is formed from the same pre-step snapshot before any state
    changes.
    """
    roots = [agent_root(i, states, G, cfg) for i in range(len(states))]
    return [X @ Rt for X, Rt in zip(states, roots)]


def error_matrix(states) -> list[list[np.ndarray]]:
    """``E[i][j] = X_i^{-1} X_j`` for all pairs."""
    inv = [np.linalg.inv(X) for X in states]
    return [[Xi_inv @ Xj for Xj in states] for Xi_inv in inv]


def error_step(errors, G: CommGraph, cfg: ControlConfig) -> list[list[np.ndarray]]:
    """Propagate all pairwise errors one step using only the errors themselves.

    ``E_ij+ = P_i^{-1/K} E_ij P_j^{1/K}`` with ``P_i = prod_p E_ip ** w_ip``.
    """
    N = len(errors)
    roots = []
    for i in range(N):
        n = errors[i][i].shape[0]
        P = np.eye(n, dtype=np.result_type(errors[i][i], float))
        for p in G.neighbours(i):
            try:
                P = P @ weighted_power(errors[i][p], G.weights[i, p])
            except EigenvalueOnNegativeRealAxis as exc:
                raise ControllerUndefined(i, eigenvalue=exc.eigenvalue) from exc
        try:
            roots.append(matfun.kth_root(P, cfg.K))
        except EigenvalueOnNegativeRealAxis as exc:
            raise ControllerUndefined(i, eigenvalue=exc.eigenvalue) from exc
    inv_roots = [np.linalg.inv(Rt) for Rt in roots]
    return [[inv_roots[i] @ errors[i][j] @ roots[j] for j in range(N)] for i in range(N)]


def intersample_error(E, omega_i, omega_j, delta: float, T: float | None = None) -> np.ndarray:
    """Continuous-time error ``exp(delta Omega_i)^{-1} E exp(delta Omega_j)``
    at ``kT + delta`` under held inputs."""
    if delta <= 0 or (T is not None and delta >= T):
        raise DomainError("delta must lie in (0, T)")
    return matfun.exp_matrix(-delta * omega_i) @ E @ matfun.exp_matrix(delta * omega_j)


def lattice_residual(group, states, G: CommGraph) -> float:
    """Distance of ``(L kron I_m) t`` from the kernel lattice.

    ``t`` stacks the exponential coordinates of ``E_1j``. Periodic directions
    are compared modulo their period; the others must vanish outright.
    Returns ``inf`` if some error has no principal logarithm.
    """
    X1 = states[0]
    try:
        coords = np.array([
            liegroup.exponential_coordinates(group, relative_error(X1, Xj), check_radius=False)
            for Xj in states
        ])
    except OutsideLogNeighbourhood:
        return math.inf
    L = graphmod.laplacian_matrix(G)
    v = L @ coords  # rows: agents, columns: basis directions
    res = 0.0
    for c, d in enumerate(group.kernel_periods):
        col = v[:, c]
        if d > 0:
            col = col - d * np.round(col / d)
        res = max(res, float(np.max(np.abs(col))))
    return res


def equilibrium_residual(states, G: CommGraph, cfg: ControlConfig, group=None) -> float:
    """``max_i ||Omega_i||``, zero exactly at equilibria.

    With a commutative `group` and an unweighted graph, the lattice
    congruence of :func:`lattice_residual` (scaled to input units) is folded
    in, so both characterizations must agree for a zero result. Weighted
    powers of wrapped errors do not respect the lattice, hence the
    restriction.
    """
    res = max(float(np.linalg.norm(W, 2)) for W in controls(states, G, cfg))
    unweighted = np.all((G.weights == 0) | (G.weights == 1))
    if group is not None and group.commutative and unweighted:
        lat = lattice_residual(group, states, G)
        if math.isfinite(lat):
            res = max(res, lat / (abs(cfg.K) * cfg.T))
    return res
