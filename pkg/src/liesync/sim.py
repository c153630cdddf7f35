"""Scenario execution for the sampled closed loop and the naive Kuramoto
baseline, plus named reference scenarios."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import control, liegroup, matfun
from .control import ControlConfig
from .errors import (
    ControllerUndefined,
    DomainError,
    LeftGroup,
    NotApplicable,
    OutsideLogNeighbourhood,
)
from .graph import CommGraph, graph_from_dict
from .liegroup import GroupDescriptor

MEMBERSHIP_ABORT = 1e-6

MODES = ("proposed", "kuramoto_baseline")


@dataclass
class Scenario:
    """One synchronization experiment.

    ``initial`` holds either an (N, m) array of exponential coordinates or a
    list of N group matrices; ``initial_kind`` says which.
    """

    group: GroupDescriptor
    graph: CommGraph
    cfg: ControlConfig
    initial: object
    initial_kind: str = "coordinates"
    steps: int = 50
    intersample: int = 0
    mode: str = "proposed"
    name: str = ""

    def __post_init__(self):
        if self.steps < 1:
            raise DomainError("steps must be >= 1")
        if self.intersample < 0:
            raise DomainError("intersample must be >= 0")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}")
        if len(self.initial) != self.graph.N:
            raise DomainError("initial state count does not match the graph")
        if self.mode == "kuramoto_baseline" and self.group.name != "SO2":
            raise DomainError("the Kuramoto baseline runs on SO2 only")

    @property
    def N(self) -> int:
        return self.graph.N

    def initial_states(self) -> list[np.ndarray]:
        if self.initial_kind == "coordinates":
            return [liegroup.composed_flow(self.group, p) for p in np.asarray(self.initial, dtype=float)]
        states = [np.asarray(X) for X in self.initial]
        for i, X in enumerate(states):
            res = liegroup.check_membership(self.group, X)
            if res > 1e-9:
                raise DomainError(f"initial state {i} is not in {self.group.name} (residual {res:.3e})")
        return states


@dataclass
class Trajectory:
    """Per-step records of a run.

    ``err_norms[k, j-1]`` is ``||E_1j[k] - I||`` (induced 2-norm) for
    ``j = 2..N``. ``intersample`` holds ``(time, step, pair_index, norm)``
    tuples when requested.
    """

    T: float
    states: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    err_norms: list = field(default_factory=list)
    log_norms: list = field(default_factory=list)
    omega_max: list = field(default_factory=list)
    membership: list = field(default_factory=list)
    intersample: list = field(default_factory=list)
    converged: bool = True
    stop_reason: str = ""
    graph: CommGraph | None = None

    @property
    def steps(self) -> int:
        return len(self.states) - 1

    def norms(self) -> np.ndarray:
        return np.asarray(self.err_norms)

    def phases(self) -> np.ndarray:
        """SO(2) only: principal angle of every state, shape (steps + 1, N)."""
        return np.array([[math.atan2(X[1, 0].real, X[0, 0].real) for X in S] for S in self.states])


def _log_norm(group, E) -> float:
    try:
        return float(np.linalg.norm(matfun.principal_log(E), 2))
    except DomainError:
        return math.inf


def _record(traj, group, states, omegas):
    eye = group.identity()
    E1 = [control.relative_error(states[0], X) for X in states]
    traj.states.append(states)
    traj.errors.append(E1)
    traj.err_norms.append([float(np.linalg.norm(E - eye, 2)) for E in E1[1:]])
    traj.log_norms.append([_log_norm(group, E) for E in E1[1:]])
    traj.membership.append(max(liegroup.check_membership(group, X) for X in states))
    if omegas is not None:
        traj.omega_max.append(max(float(np.linalg.norm(W, 2)) for W in omegas))


def run(sc: Scenario, abort_outside_u: bool = False) -> Trajectory:
    """Run a scenario for ``sc.steps`` steps.

    The trajectory holds ``steps + 1`` snapshots (step 0 is the initial
    condition). With ``abort_outside_u`` the run stops, marked non-converged,
    as soon as some ``||Log E_1j||`` reaches the group's radius.

    Raises
    ------
    ControllerUndefined
        With the step and agent at which the input could not be formed.
    LeftGroup
        When a state's membership residual exceeds 1e-6.
    """
    if sc.mode == "kuramoto_baseline":
        return _run_kuramoto(sc)
    group, G, cfg = sc.group, sc.graph, sc.cfg
    states = sc.initial_states()
    traj = Trajectory(T=cfg.T, graph=G)
    k = 0
    while True:
        try:
            omegas = control.controls(states, G, cfg)
        except ControllerUndefined as exc:
            raise ControllerUndefined(exc.agent, step=k, eigenvalue=exc.eigenvalue) from exc
        _record(traj, group, states, omegas)
        if traj.membership[-1] > MEMBERSHIP_ABORT:
            raise LeftGroup(k, traj.membership[-1])
        if abort_outside_u and max(traj.log_norms[-1], default=0.0) >= group.radius:
            traj.converged = False
            traj.stop_reason = f"left log neighbourhood at step {k}"
            break
        if k == sc.steps:
            break
        if sc.intersample:
            E1 = traj.errors[-1]
            for q in range(1, sc.intersample + 1):
                delta = cfg.T * q / (sc.intersample + 1)
                for j in range(1, len(states)):
                    Ed = control.intersample_error(E1[j], omegas[0], omegas[j], delta, cfg.T)
                    nrm = float(np.linalg.norm(Ed - group.identity(), 2))
                    traj.intersample.append((k * cfg.T + delta, k, j, nrm))
        try:
            states = control.closed_loop_step(states, G, cfg)
        except ControllerUndefined as exc:
            raise ControllerUndefined(exc.agent, step=k, eigenvalue=exc.eigenvalue) from exc
        k += 1
    return traj


# --- Kuramoto baseline ---------------------------------------------------------


def kuramoto_step(theta, a, T: float) -> np.ndarray:
    """Sample-and-hold Kuramoto update ``theta_i - T sum_j a_ij sin(theta_i - theta_j)``."""
    theta = np.asarray(theta, dtype=float)
    a = np.asarray(a, dtype=float)
    if a.shape != (theta.size, theta.size):
        raise ValueError("coupling matrix must be N x N")
    return theta - T * np.sum(a * np.sin(theta[:, None] - theta[None, :]), axis=1)


def phase_spread(theta) -> float:
    """Largest pairwise phase difference, measured on the circle."""
    theta = np.asarray(theta, dtype=float)
    d = np.angle(np.exp(1j * (theta[:, None] - theta[None, :])))
    return float(np.max(np.abs(d)))


def kuramoto_run(theta0, a, T: float, steps: int) -> np.ndarray:
    """Phase history of shape ``(steps + 1, N)``."""
    out = [np.asarray(theta0, dtype=float)]
    for _ in range(steps):
        out.append(kuramoto_step(out[-1], a, T))
    return np.array(out)


def _run_kuramoto(sc: Scenario) -> Trajectory:
    if sc.initial_kind == "coordinates":
        theta = np.asarray(sc.initial, dtype=float).reshape(-1)
    else:
        theta = np.array([math.atan2(X[1, 0], X[0, 0]) for X in sc.initial])
    a = sc.graph.weights
    T = sc.cfg.T
    traj = Trajectory(T=T, graph=sc.graph)
    group = sc.group
    for k in range(sc.steps + 1):
        states = [liegroup.composed_flow(group, [t]) for t in theta]
        u = -np.sum(a * np.sin(theta[:, None] - theta[None, :]), axis=1)
        omegas = [ui * liegroup.J for ui in u]
        _record(traj, group, states, omegas)
        if k < sc.steps:
            theta = kuramoto_step(theta, a, T)
    return traj


# --- metrics ------------------------------------------------------------------


def _is_complete_unweighted(G: CommGraph) -> bool:
    N = G.N
    return bool(np.array_equal(G.weights, np.ones((N, N)) - np.eye(N)))


def measure_settling(traj: Trajectory, eps: float) -> int | None:
    """Smallest k with ``||Log E_1j[k']|| <= eps ||Log E_1j[0]||`` for all j and
    all ``k' >= k``; None if never reached within the run.

    Raises :class:`NotApplicable` unless the run used an unweighted complete
    graph.
    """
    if traj.graph is None or not _is_complete_unweighted(traj.graph):
        raise NotApplicable("settling time is defined for unweighted complete graphs")
    logs = np.asarray(traj.log_norms)
    ok = np.all(logs <= eps * logs[0][None, :], axis=1)
    if not ok[-1]:
        return None
    # last step that violates, plus one
    bad = np.flatnonzero(~ok)
    return 0 if bad.size == 0 else int(bad[-1] + 1)


# --- CSV export ---------------------------------------------------------------

CSV_HEADER = ["step", "time", "pair", "err_norm", "omega_max", "membership_residual"]


def _fmt(x) -> str:
    return f"{x:.17g}"


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """One row per (step, pair); inter-sample rows carry fractional times and
    an empty ``omega_max``/``membership_residual``."""
    inter: dict[int, list] = {}
    for t, k, j, nrm in traj.intersample:
        inter.setdefault(k, []).append((t, j, nrm))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for k, norms in enumerate(traj.err_norms):
            om = traj.omega_max[k] if k < len(traj.omega_max) else math.nan
            for j, nrm in enumerate(norms, start=2):
                w.writerow([k, _fmt(k * traj.T), f"1-{j}", _fmt(nrm), _fmt(om), _fmt(traj.membership[k])])
            for t, j, nrm in inter.get(k, []):
                w.writerow([k, _fmt(t), f"1-{j + 1}", _fmt(nrm), "", ""])


def write_states_csv(traj: Trajectory, group: GroupDescriptor, path) -> None:
    """Exponential coordinates of every agent's state (blank outside U)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "time", "agent"] + [f"c{c + 1}" for c in range(group.m)])
        for k, states in enumerate(traj.states):
            for i, X in enumerate(states, start=1):
                try:
                    p = liegroup.exponential_coordinates(group, X, check_radius=False)
                    vals = [_fmt(v) for v in p]
                except OutsideLogNeighbourhood:
                    vals = [""] * group.m
                w.writerow([k, _fmt(k * traj.T), i] + vals)


# --- presets ------------------------------------------------------------------

TRIANGULAR_LAPLACIAN = np.array([
    [0.5, -0.1, -0.1, -0.1, -0.1, -0.1],
    [0.0, 0.8, -0.2, -0.2, -0.2, -0.2],
    [0.0, 0.0, 0.9, -0.3, -0.3, -0.3],
    [0.0, 0.0, 0.0, 0.8, -0.4, -0.4],
    [0.0, 0.0, 0.0, 0.0, 0.5, -0.5],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
])

# seeded draw from (-pi/2, pi/2); see kuramoto_initial_phases
KURAMOTO_SEED = 7


def kuramoto_initial_phases(N: int = 3, seed: int = KURAMOTO_SEED) -> np.ndarray:
    return np.random.default_rng(seed).uniform(-math.pi / 2, math.pi / 2, size=N)


def deadbeat_phases(N: int = 40) -> np.ndarray:
    """``-pi/(N+1) + i 2 pi / ((N+1)(N-1))`` for i = 0..N-1 (evenly spaced,
    symmetric about zero)."""
    i = np.arange(N)
    return -math.pi / (N + 1) + i * 2 * math.pi / ((N + 1) * (N - 1))


def su2_initial_coordinates(N: int = 6) -> np.ndarray:
    """Pauli coefficients ``(a_i, b_i, c_i)``, zero-based ``i``."""
    i = np.arange(N)
    return np.stack([
        -0.32 + i * 0.6 / (N - 1),
        -0.06 + i * 0.3 / (N - 1),
        -0.42 + i * 0.6 / (N - 1),
    ], axis=1)


def su2_initial_matrices(N: int = 6) -> list[np.ndarray]:
    """``exp(a_i s1 + b_i s2 + c_i s3)``: one exponential of the full sum, not
    the composed flow (the Pauli directions do not commute)."""
    return [
        matfun.exp_matrix(liegroup.algebra_element(liegroup.SU2, c)) for c in su2_initial_coordinates(N)
    ]


def preset(name: str) -> Scenario:
    """Named reference scenarios; see ``PRESETS``."""
    so2 = liegroup.SO2
    if name in ("fig2_kuramoto_T01", "fig3_kuramoto_T08"):
        T = 0.1 if name.endswith("T01") else 0.8
        return Scenario(so2, CommGraph.complete(3), ControlConfig(T=T, K=1.0),
                        kuramoto_initial_phases()[:, None], steps=200,
                        mode="kuramoto_baseline", name=name)
    if name == "fig4_kuramoto_proposed":
        return Scenario(so2, CommGraph.complete(3), ControlConfig(T=0.8, K=2.0),
                        kuramoto_initial_phases()[:, None], steps=50, name=name)
    if name == "deadbeat_so2":
        return Scenario(so2, CommGraph.complete(40), ControlConfig(T=1.0, K=40.0),
                        deadbeat_phases(40)[:, None], steps=5, name=name)
    if name == "fig5_su2":
        return Scenario(liegroup.SU2, CommGraph.from_laplacian(TRIANGULAR_LAPLACIAN),
                        ControlConfig(T=1.0, K=3.5), su2_initial_matrices(6),
                        initial_kind="matrices", steps=100, name=name)
    raise KeyError(f"unknown preset {name!r}; choose from {PRESETS}")


PRESETS = ("fig2_kuramoto_T01", "fig3_kuramoto_T08", "fig4_kuramoto_proposed", "deadbeat_so2", "fig5_su2")


# --- structured-text scenarios -------------------------------------------------


def _matrix_to_json(M):
    M = np.asarray(M)
    if np.iscomplexobj(M) and np.any(M.imag):
        return [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return np.real(M).tolist()


def _matrix_from_json(rows):
    arr = np.array(rows, dtype=float)
    if arr.ndim == 3:
        return arr[..., 0] + 1j * arr[..., 1]
    return arr


def scenario_to_dict(sc: Scenario) -> dict:
    if sc.initial_kind == "coordinates":
        init = {"coordinates": np.asarray(sc.initial, dtype=float).tolist()}
    else:
        init = {"matrices": [_matrix_to_json(X) for X in sc.initial]}
    return {
        "group": sc.group.to_dict(),
        "N": sc.N,
        "graph": sc.graph.to_dict(),
        "T": sc.cfg.T,
        "K": sc.cfg.K,
        "steps": sc.steps,
        "initial": init,
        "intersample": sc.intersample,
        "mode": sc.mode,
    }


class ConfigError(DomainError):
    """Malformed scenario document; message names the offending field."""


def scenario_from_dict(d) -> Scenario:
    """Build a scenario from its JSON data model.

    Keys: ``group``, ``N``, ``graph`` (``edges``/``laplacian``/``complete``),
    ``T``, ``K``, ``steps``, ``initial`` (``coordinates``/``matrices``/
    ``preset``), ``intersample``, ``mode``. A top-level ``preset`` key loads
    a named preset, and any other keys given override it.
    """
    if not isinstance(d, dict):
        raise ConfigError("scenario must be a mapping")
    base = None
    if "preset" in d:
        try:
            base = scenario_to_dict(preset(d["preset"]))
        except KeyError as exc:
            raise ConfigError(f"field 'preset': {exc.args[0]}") from None
        base.update({k: v for k, v in d.items() if k != "preset"})
        d = base

    def need(key):
        if key not in d:
            raise ConfigError(f"missing field {key!r}")
        return d[key]

    try:
        group = liegroup.descriptor_from_dict(need("group"))
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"field 'group': {exc}") from None
    try:
        N = int(need("N"))
        gdata = need("graph")
        if not isinstance(gdata, dict):
            raise ValueError("graph must be a mapping")
        graph = graph_from_dict(gdata, N=N)
    except ConfigError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"field 'graph': {exc}") from None
    if graph.N != N:
        raise ConfigError(f"field 'graph': has {graph.N} vertices but N = {N}")
    try:
        cfg = ControlConfig(T=float(need("T")), K=float(need("K")))
    except ConfigError:
        raise
    except (ValueError, TypeError, DomainError) as exc:
        raise ConfigError(f"fields 'T'/'K': {exc}") from None
    init = need("initial")
    if not isinstance(init, dict):
        raise ConfigError("field 'initial': must be a mapping")
    try:
        if "preset" in init:
            kind, initial = _initial_preset(init["preset"], N)
        elif "coordinates" in init:
            kind = "coordinates"
            initial = np.array(init["coordinates"], dtype=float).reshape(N, group.m)
        elif "matrices" in init:
            kind = "matrices"
            initial = [_matrix_from_json(M) for M in init["matrices"]]
        else:
            raise ValueError("needs 'coordinates', 'matrices' or 'preset'")
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"field 'initial': {exc}") from None
    try:
        return Scenario(
            group, graph, cfg, initial, initial_kind=kind,
            steps=int(d.get("steps", 50)), intersample=int(d.get("intersample", 0)),
            mode=str(d.get("mode", "proposed")), name=str(d.get("name", "")),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None


def _initial_preset(name, N):
    if name == "kuramoto":
        return "coordinates", kuramoto_initial_phases(N)[:, None]
    if name == "deadbeat":
        return "coordinates", deadbeat_phases(N)[:, None]
    if name == "su2_pauli":
        return "matrices", su2_initial_matrices(N)
    raise ValueError(f"unknown initial preset {name!r}")
