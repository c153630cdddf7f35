"""Weighted digraphs, Laplacians and gain bounds.

Edge ``(i, j)`` means agent ``i`` measures its error relative to agent ``j``
(``j`` is a neighbour of ``i``). Agents are indexed from 0.

The N-only gain floor comes from maximizing ``g = |lam|^2 / (2 Re lam)`` over
a region of the complex plane that contains every Laplacian eigenvalue of any
N-vertex digraph with weights in [0, 1]. Its upper boundary is made of five
loci::

    1: (s - 1)^2 + w^2 = (N - 1)^2
    2: w = cot(pi/N) s
    3: w = cot(pi/2N) / 2
    4: w = cot(pi/N) (N - s)
    5: (s + 1 - N)^2 + w^2 = (N - 1)^2
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import matfun
from .errors import Disconnected, DomainError

#: eigenvalues within this distance of 0 count as zero
ZERO_EIG_TOL = 1e-9


@dataclass(frozen=True)
class CommGraph:
    """Communication graph as a dense weight matrix.

    ``weights[i, j] = w_ij`` in [0, 1]; zero means no edge. Self-loops are
    rejected.
    """

    weights: np.ndarray

    def __post_init__(self):
        W = np.array(self.weights, dtype=float)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise ValueError("weight matrix must be square")
        if np.any(np.diag(W) != 0):
            raise ValueError("self-loops are not allowed")
        if np.any(W < 0) or np.any(W > 1):
            raise ValueError("weights must lie in [0, 1]")
        W.setflags(write=False)
        object.__setattr__(self, "weights", W)

    @property
    def N(self) -> int:
        return self.weights.shape[0]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [tuple(map(int, e)) for e in np.argwhere(self.weights > 0)]

    def neighbours(self, i: int) -> list[int]:
        """Neighbour set of agent `i` in ascending order."""
        return [int(j) for j in np.flatnonzero(self.weights[i] > 0)]

    @classmethod
    def complete(cls, N: int) -> "CommGraph":
        return cls(np.ones((N, N)) - np.eye(N))

    @classmethod
    def from_edges(cls, N: int, edges) -> "CommGraph":
        """`edges` holds ``(i, j)`` or ``(i, j, w)`` tuples, or dicts with
        keys ``from``, ``to`` and optional ``weight``."""
        W = np.zeros((N, N))
        for e in edges:
            if isinstance(e, dict):
                i, j, w = e["from"], e["to"], e.get("weight", 1.0)
            elif len(e) == 2:
                (i, j), w = e, 1.0
            else:
                i, j, w = e
            W[int(i), int(j)] = float(w)
        return cls(W)

    @classmethod
    def from_laplacian(cls, L) -> "CommGraph":
        L = np.asarray(L, dtype=float)
        if np.max(np.abs(L.sum(axis=1))) > 1e-12:
            raise ValueError("Laplacian rows must sum to zero")
        W = -L.copy()
        np.fill_diagonal(W, 0.0)
        W[np.abs(W) < 1e-15] = 0.0
        return cls(W)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "edges": [
                {"from": i, "to": j, "weight": float(self.weights[i, j])} for i, j in self.edges
            ],
        }


@dataclass(frozen=True)
class LaplacianReport:
    L: np.ndarray
    spectrum: np.ndarray
    connected: bool

    @property
    def rows(self):
        return self.L

    @property
    def nonzero_spectrum(self) -> np.ndarray:
        """Spectrum with one (the structural) zero eigenvalue removed."""
        k = int(np.argmin(np.abs(self.spectrum)))
        return np.delete(self.spectrum, k)


def laplacian_matrix(G: CommGraph) -> np.ndarray:
    W = G.weights
    return np.diag(W.sum(axis=1)) - W


def laplacian(G: CommGraph) -> LaplacianReport:
    """Laplacian, its spectrum, and connectivity (simple zero eigenvalue)."""
    L = laplacian_matrix(G)
    spec = matfun.spectrum(L)
    zeros = int(np.sum(np.abs(spec) <= ZERO_EIG_TOL))
    return LaplacianReport(L=L, spectrum=spec, connected=zeros == 1)


def report_from_matrix(L) -> LaplacianReport:
    return laplacian(CommGraph.from_laplacian(L))


def exact_gain_bound(rep: LaplacianReport) -> float:
    """``max |lam|^2 / (2 Re lam)`` over the nonzero Laplacian spectrum.

    Any ``K`` strictly above this places every mapped eigenvalue ``1 - lam/K``
    except the structural one inside the open unit disc.
    """
    if not rep.connected:
        raise Disconnected("Laplacian zero eigenvalue is not simple")
    lam = rep.nonzero_spectrum
    if lam.size == 0:
        return 0.0
    return float(np.max(np.abs(lam) ** 2 / (2.0 * lam.real)))


def kmin_closed_form(N: int) -> float:
    """Smallest gain guaranteeing stability on every connected N-agent digraph."""
    if N < 2:
        raise DomainError("K_min needs N >= 2")
    if N <= 9:
        return N / 2
    if N <= 18:
        return 0.125 / math.sin(math.pi / (2 * N)) ** 2 / math.cos(math.pi / N)
    return float(N - 1)


# --- spectral inclusion region ------------------------------------------------


@dataclass(frozen=True)
class RegionPoint:
    sigma: float
    omega: float
    locus: int
    g: float


def _cot(x):
    return 1.0 / math.tan(x)


def locus_omega(locus: int, sigma, N: int):
    """Upper-half ``omega`` of locus 1..5 at `sigma` (NaN where undefined)."""
    s = np.asarray(sigma, dtype=float)
    if locus == 1:
        return np.sqrt(np.where((N - 1) ** 2 - (s - 1) ** 2 >= 0, (N - 1) ** 2 - (s - 1) ** 2, np.nan))
    if locus == 2:
        return _cot(math.pi / N) * s
    if locus == 3:
        return np.full_like(s, 0.5 * _cot(math.pi / (2 * N)))
    if locus == 4:
        return _cot(math.pi / N) * (N - s)
    if locus == 5:
        r2 = (N - 1) ** 2 - (s + 1 - N) ** 2
        return np.sqrt(np.where(r2 >= 0, r2, np.nan))
    raise ValueError(f"no locus {locus}")


def locus_residual(locus: int, sigma: float, omega: float, N: int) -> float:
    """Residual of the implicit locus equation at ``(sigma, omega)``."""
    c = _cot(math.pi / N)
    if locus == 1:
        return (sigma - 1) ** 2 + omega**2 - (N - 1) ** 2
    if locus == 2:
        return omega - c * sigma
    if locus == 3:
        return omega - 0.5 * _cot(math.pi / (2 * N))
    if locus == 4:
        return omega - c * (N - sigma)
    if locus == 5:
        return (sigma + 1 - N) ** 2 + omega**2 - (N - 1) ** 2
    raise ValueError(f"no locus {locus}")


def intersection_points(N: int) -> dict[str, float]:
    """Closed-form sigma at which pairs of loci meet (nontrivial roots)."""
    h = 0.5 * _cot(math.pi / (2 * N))
    disc = (N - 1) ** 2 - h**2
    root = math.sqrt(disc) if disc >= 0 else math.nan
    s23 = 0.5 * (1 + 1 / math.cos(math.pi / N))
    return {
        "35": N - 1 - root,
        "13": 1 + root,
        "14": (N - 1) * math.cos(2 * math.pi / N) + 1,
        "25": (N - 1) * (1 - math.cos(2 * math.pi / N)),
        "23": s23,
        "34": N - s23,
        "24": N / 2,
    }


def boundary_segments(N: int) -> list[tuple[int, float, float]]:
    """Upper boundary as ``(locus, sigma_start, sigma_end)`` pieces."""
    if N < 3:
        raise DomainError("region boundary needs N >= 3")
    s = intersection_points(N)
    if N == 3:
        return [(2, 0.0, s["24"]), (4, s["24"], float(N))]
    if N <= 18:
        return [(2, 0.0, s["23"]), (3, s["23"], s["34"]), (4, s["34"], float(N))]
    return [
        (2, 0.0, s["25"]),
        (5, s["25"], s["35"]),
        (3, s["35"], s["13"]),
        (1, s["13"], s["14"]),
        (4, s["14"], float(N)),
    ]


def g_value(sigma, omega):
    """``(sigma^2 + omega^2) / (2 sigma)``."""
    sigma = np.asarray(sigma, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (sigma**2 + np.asarray(omega) ** 2) / (2 * sigma)


def region_boundary(N: int, samples: int = 1000) -> list[RegionPoint]:
    """Densely sampled upper boundary, assembled from the locus segments.

    Each segment gets a share of `samples` proportional to its sigma length
    (at least two points). The point at ``sigma = 0`` carries ``g = nan``.
    """
    if samples < 100:
        raise DomainError("need at least 100 samples")
    segs = boundary_segments(N)
    pts: list[RegionPoint] = []
    for locus, a, b in segs:
        k = max(2, int(round(samples * (b - a) / N)))
        sig = np.linspace(a, b, k)
        om = locus_omega(locus, sig, N)
        om = np.where(np.abs(om) < 1e-12, 0.0, om)
        for s, w, gv in zip(sig, om, g_value(sig, om)):
            pts.append(RegionPoint(float(s), float(w), locus, float(gv)))
    return pts


def envelope_omega(sigma, N: int):
    """Upper boundary as the pointwise minimum of all applicable loci.

    Independent of the closed-form breakpoints; used by the oracle and the
    point-in-region test.
    """
    s = np.atleast_1d(np.asarray(sigma, dtype=float))
    cands = [locus_omega(k, s, N) for k in (2, 3, 4)]
    for k in (1, 5):
        w = locus_omega(k, s, N)
        cands.append(np.where(np.isnan(w), -np.inf, w))
    env = np.min(np.stack(cands), axis=0)
    env = np.where((s < 0) | (s > N), -np.inf, env)
    return env


def in_region(lam: complex, N: int, tol: float = 1e-8) -> bool:
    """Whether `lam` lies in the closed inclusion region for N vertices."""
    s, w = float(np.real(lam)), abs(float(np.imag(lam)))
    if N <= 2:
        return abs(w) <= tol and -tol <= s <= N + tol
    sc = min(max(s, 0.0), float(N))
    if abs(sc - s) > tol:
        return False
    return w <= float(envelope_omega(sc, N)[0]) + tol


@dataclass(frozen=True)
class RegionMaximum:
    N: int
    g: float
    sigma: float
    omega: float
    label: str
    candidates: dict = field(default_factory=dict)


def region_maximum(N: int, samples: int = 10_000) -> RegionMaximum:
    """Maximize g over the upper boundary by sampling the locus envelope and
    refining around the best sample with bounded golden-section search."""
    if N < 3:
        raise DomainError("region maximization needs N >= 3")
    if samples < 100:
        raise DomainError("need at least 100 samples")
    sig = np.linspace(0.0, float(N), samples + 1)[1:]
    om = np.maximum(envelope_omega(sig, N), 0.0)
    gv = g_value(sig, om)
    k = int(np.argmax(gv))
    lo, hi = sig[max(k - 1, 0)], sig[min(k + 1, sig.size - 1)]

    def neg_g(s):
        w = max(float(envelope_omega(s, N)[0]), 0.0)
        return -float(g_value(s, w))

    best_s, best_g = float(sig[k]), float(gv[k])
    if hi > lo:
        res = minimize_scalar(neg_g, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
        if -res.fun > best_g:
            best_s, best_g = float(res.x), float(-res.fun)
    best_w = max(float(envelope_omega(best_s, N)[0]), 0.0)
    cands = candidate_maxima(N)
    label = _match_label(N, best_g, cands)
    return RegionMaximum(N, best_g, best_s, best_w, label, cands)


def region_oracle(N: int, samples: int = 10_000) -> float:
    """Numerical maximum of g over the inclusion region (N >= 3)."""
    return region_maximum(N, samples).g


def candidate_maxima(N: int) -> dict[str, float]:
    """Closed-form values of g at the boundary corners and special points.

    ``g13`` uses the same ``cot(pi/2N)`` term as the locus-3 height, so that
    it equals ``1 + N(N-2) / (2 sigma13)``. Values that do not exist for this
    N (negative discriminant) are NaN.
    """
    if N < 3:
        raise DomainError("candidate maxima need N >= 3")
    pts = intersection_points(N)
    c = _cot(math.pi / N)
    sec = 1 / math.cos(math.pi / N)
    h = 0.5 * _cot(math.pi / (2 * N))
    q = 2 * N - 1 - sec
    return {
        "g_N": N / 2,
        "g5": float(N - 1),
        "g13": 1 + N * (N - 2) / (2 * pts["13"]),
        "g14": 1 + N * (N - 2) / (2 * pts["14"]),
        "g23": 0.125 / math.sin(math.pi / (2 * N)) ** 2 * sec,
        "g34": (4 * h**2 + q**2) / (4 * q),
        "g24": N * (c**2 + 1) / 4,
    }


def applicable_candidates(N: int) -> list[str]:
    """Candidate labels whose points lie on the boundary for this N."""
    if N == 3:
        return ["g_N", "g24"]
    if N <= 18:
        return ["g_N", "g23", "g34"]
    return ["g_N", "g5", "g13", "g14"]


def _match_label(N: int, value: float, cands: dict[str, float]) -> str:
    labels = applicable_candidates(N)
    return min(labels, key=lambda lab: abs(cands[lab] - value))


def write_region_csv(points, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["locus", "sigma", "omega", "g"])
        for p in points:
            w.writerow([p.locus, f"{p.sigma:.17g}", f"{p.omega:.17g}", f"{p.g:.17g}"])


def load_graph(path) -> CommGraph:
    """Read a graph file: JSON with ``{"N", "edges": [...]}``, ``{"laplacian"}``
    or ``{"complete": N}``."""
    with open(path) as fh:
        data = json.load(fh)
    return graph_from_dict(data)


def graph_from_dict(data, N: int | None = None) -> CommGraph:
    if "complete" in data:
        return CommGraph.complete(int(data["complete"]))
    if "laplacian" in data:
        return CommGraph.from_laplacian(np.array(data["laplacian"], dtype=float))
    if "edges" in data:
        n = int(data.get("N", N if N is not None else 0))
        if n <= 0:
            raise ValueError("edge-list graph needs N")
        return CommGraph.from_edges(n, data["edges"])
    raise ValueError("graph needs one of 'edges', 'laplacian', 'complete'")


def random_connected_digraph(N: int, rng, density: float = 0.3, weighted: bool = True) -> CommGraph:
    """Random digraph with a spanning tree toward a random root.

    Every non-root vertex gets one edge to an earlier vertex in a random
    order; extra edges appear independently with probability `density`.
    """
    order = rng.permutation(N)
    W = np.zeros((N, N))
    for pos in range(1, N):
        i = order[pos]
        j = order[rng.integers(0, pos)]
        W[i, j] = 1.0
    extra = rng.random((N, N)) < density
    np.fill_diagonal(extra, False)
    W[extra] = 1.0
    if weighted:
        W = np.where(W > 0, rng.uniform(0.05, 1.0, size=W.shape), 0.0)
    return CommGraph(W)
