"""Group descriptors, Lie algebra bases, the composed flow and exponential
coordinates.

Group and algebra elements are plain ``numpy`` arrays; a
:class:`GroupDescriptor` travels alongside them and knows the basis, the
defining relations and the size of the neighbourhood on which ``Log`` inverts
``exp``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import matfun
from .errors import EigenvalueOnNegativeRealAxis, OutsideLogNeighbourhood

J = np.array([[0.0, -1.0], [1.0, 0.0]])

# su(2) basis, as used for the SU(2) study
SIGMA1 = np.array([[0, 1j], [1j, 0]])
SIGMA2 = np.array([[0, -1], [1, 0]], dtype=complex)
SIGMA3 = np.array([[1j, 0], [0, -1j]])

#: universal default radius of the log neighbourhood U
DEFAULT_RADIUS = math.log(2.0)

_SO3_BASIS = (
    np.array([[0.0, 0, 0], [0, 0, -1], [0, 1, 0]]),
    np.array([[0.0, 0, 1], [0, 0, 0], [-1, 0, 0]]),
    np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 0]]),
)
_SE2_BASIS = (
    np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 0]]),
    np.array([[0.0, 0, 1], [0, 0, 0], [0, 0, 0]]),
    np.array([[0.0, 0, 0], [0, 0, 1], [0, 0, 0]]),
)
_TRANSLATION = np.array([[0.0, 1.0], [0.0, 0.0]])


@dataclass(frozen=True, eq=False)
class GroupDescriptor:
    """Immutable description of a matrix Lie group.

    Attributes
    ----------
    name : str
        ``"SO2"``, ``"SO3"``, ``"SU2"``, ``"SE2"``, ``"R"``, ``"Torus(k)"``,
        ``"Cylinder(k,l)"``, ``"Product[...]"`` or ``"custom"``.
    basis : tuple of (n, n) arrays
        Real-linearly independent spanning set of the Lie algebra.
    kernel_periods : tuple of float
        Period of ``t -> exp(t H_i)`` for each basis element, 0 if injective.
    radius : float
        Radius r of ``U = {exp(A) : ||A|| < r}``.
    kind : str
        Which defining relations :func:`check_membership` tests.
    factors : tuple of GroupDescriptor
        Diagonal blocks, for direct products only.
    """

    name: str
    basis: tuple
    kernel_periods: tuple
    radius: float = DEFAULT_RADIUS
    kind: str = "custom"
    factors: tuple = field(default=())
    commutative: bool = field(init=False)

    def __post_init__(self):
        basis = tuple(np.array(B, copy=True) for B in self.basis)
        for B in basis:
            B.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "kernel_periods", tuple(float(d) for d in self.kernel_periods))
        if len(self.kernel_periods) != len(basis):
            raise ValueError("one kernel period per basis element")
        n = basis[0].shape[0]
        if any(B.shape != (n, n) for B in basis):
            raise ValueError("basis matrices must share one square shape")
        if np.linalg.matrix_rank(_real_design(basis)) != len(basis):
            raise ValueError("basis is not linearly independent over the reals")
        comm = all(
            np.max(np.abs(A @ B - B @ A)) <= 1e-12 for A in basis for B in basis
        )
        object.__setattr__(self, "commutative", comm)

    @property
    def n(self) -> int:
        return self.basis[0].shape[0]

    @property
    def m(self) -> int:
        return len(self.basis)

    @property
    def is_complex(self) -> bool:
        return any(np.iscomplexobj(B) and np.any(B.imag) for B in self.basis)

    def identity(self) -> np.ndarray:
        return np.eye(self.n, dtype=complex if self.is_complex else float)

    def __repr__(self):
        return f"GroupDescriptor({self.name}, n={self.n}, m={self.m})"

    # serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        if self.kind != "custom":
            return {"name": self.name}
        return {
            "name": "custom",
            "basis": [_matrix_to_pairs(B) for B in self.basis],
            "kernel_periods": list(self.kernel_periods),
            "radius": self.radius,
        }


def _real_design(basis) -> np.ndarray:
    """Columns are basis matrices flattened into real vectors (Re, Im)."""
    cols = [np.concatenate([np.real(B).ravel(), np.imag(B).ravel()]) for B in basis]
    return np.stack(cols, axis=1)


def _matrix_to_pairs(M):
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _pairs_to_matrix(rows):
    arr = np.array(rows, dtype=float)
    if arr.ndim == 2:
        return arr
    M = arr[..., 0] + 1j * arr[..., 1]
    return M.real if not np.any(M.imag) else M


# built-in descriptors ---------------------------------------------------

SO2 = GroupDescriptor("SO2", (J,), (2 * math.pi,), radius=math.pi, kind="SO")
SO3 = GroupDescriptor("SO3", _SO3_BASIS, (2 * math.pi,) * 3, radius=math.pi, kind="SO")
SU2 = GroupDescriptor("SU2", (SIGMA1, SIGMA2, SIGMA3), (2 * math.pi,) * 3, radius=math.pi, kind="SU")
SE2 = GroupDescriptor("SE2", _SE2_BASIS, (2 * math.pi, 0.0, 0.0), radius=math.pi, kind="SE2")
R = GroupDescriptor("R", (_TRANSLATION,), (0.0,), radius=math.inf, kind="unipotent")


def direct_product(factors, name: str | None = None) -> GroupDescriptor:
    """Block-diagonal direct product of descriptors."""
    factors = tuple(factors)
    sizes = [f.n for f in factors]
    n = sum(sizes)
    dtype = complex if any(f.is_complex for f in factors) else float
    basis, periods = [], []
    offset = 0
    for f in factors:
        for B, d in zip(f.basis, f.kernel_periods):
            M = np.zeros((n, n), dtype=dtype)
            M[offset : offset + f.n, offset : offset + f.n] = B
            basis.append(M)
            periods.append(d)
        offset += f.n
    name = name or "Product[" + ",".join(f.name for f in factors) + "]"
    return GroupDescriptor(
        name, tuple(basis), tuple(periods),
        radius=min(f.radius for f in factors), kind="product", factors=factors,
    )


def torus(k: int) -> GroupDescriptor:
    """T^k as k diagonal SO(2) blocks."""
    return direct_product([SO2] * k, name=f"Torus({k})")


def cylinder(k: int, l: int) -> GroupDescriptor:
    """T^k x R^l: k rotation blocks followed by l unipotent translation blocks."""
    return direct_product([SO2] * k + [R] * l, name=f"Cylinder({k},{l})")


_BUILTIN = {"SO2": SO2, "SO3": SO3, "SU2": SU2, "SE2": SE2, "R": R}


def descriptor_from_dict(d) -> GroupDescriptor:
    """Inverse of :meth:`GroupDescriptor.to_dict`.

    Accepts a bare name string, ``{"name": "Torus(2)"}``-style names,
    ``{"name": "Product", "factors": [...]}`` or a custom basis given as
    row-major lists of ``[re, im]`` pairs.
    """
    if isinstance(d, str):
        d = {"name": d}
    name = str(d["name"])
    if name in _BUILTIN:
        return _BUILTIN[name]
    if name.startswith("Torus(") and name.endswith(")"):
        return torus(int(name[6:-1]))
    if name.startswith("Cylinder(") and name.endswith(")"):
        k, l = (int(s) for s in name[9:-1].split(","))
        return cylinder(k, l)
    if name.startswith("Product"):
        if "factors" in d:
            return direct_product([descriptor_from_dict(f) for f in d["factors"]])
        inner = name[len("Product["):-1]
        return direct_product([descriptor_from_dict(s) for s in _split_top(inner)])
    if name == "custom":
        basis = tuple(_pairs_to_matrix(B) for B in d["basis"])
        periods = d.get("kernel_periods", [0.0] * len(basis))
        return GroupDescriptor("custom", basis, tuple(periods), radius=float(d.get("radius", DEFAULT_RADIUS)))
    raise ValueError(f"unknown group {name!r}")


def _split_top(s):
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        parts.append(cur)
    return parts


# operations ---------------------------------------------------------------

def algebra_element(group: GroupDescriptor, p) -> np.ndarray:
    """``sum_i p_i H_i``."""
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size != group.m:
        raise ValueError(f"expected {group.m} coordinates, got {p.size}")
    return sum(t * B for t, B in zip(p, group.basis))


def composed_flow(group: GroupDescriptor, p) -> np.ndarray:
    """``exp(t_1 H_1) ... exp(t_m H_m)``, factors in ascending basis order."""
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size != group.m:
        raise ValueError(f"expected {group.m} coordinates, got {p.size}")
    X = group.identity()
    for t, B in zip(p, group.basis):
        if t != 0.0:
            X = X @ matfun.exp_matrix(t * B)
    return X


def algebra_coordinates(group: GroupDescriptor, A) -> tuple[np.ndarray, float]:
    """Real least-squares coefficients of `A` on the basis and the residual norm."""
    M = _real_design(group.basis)
    A = np.asarray(A)
    rhs = np.concatenate([np.real(A).ravel(), np.imag(A).ravel()])
    coef, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    resid = float(np.linalg.norm(M @ coef - rhs))
    return coef, resid


def projection_residual(group: GroupDescriptor, A) -> float:
    """Distance of `A` from the algebra's real span."""
    return algebra_coordinates(group, A)[1]


def exponential_coordinates(group: GroupDescriptor, X, check_radius: bool = True) -> np.ndarray:
    """Coordinates ``t`` with ``Log(X) = sum t_i H_i``.

    Raises :class:`OutsideLogNeighbourhood` when ``Log X`` is undefined, leaves
    the algebra, or (with `check_radius`) has norm ``>= group.radius``.
    """
    try:
        A = matfun.principal_log(X)
    except EigenvalueOnNegativeRealAxis as exc:
        raise OutsideLogNeighbourhood(str(exc)) from exc
    if check_radius and np.linalg.norm(A, 2) >= group.radius:
        raise OutsideLogNeighbourhood(
            f"||Log X|| = {np.linalg.norm(A, 2):.6g} >= r = {group.radius:.6g}"
        )
    coef, resid = algebra_coordinates(group, A)
    if resid > 1e-9 * max(1.0, np.linalg.norm(A)):
        raise OutsideLogNeighbourhood(f"Log X is off the algebra (residual {resid:.3e})")
    return coef


def in_log_neighbourhood(group: GroupDescriptor, X) -> bool:
    try:
        exponential_coordinates(group, X)
    except OutsideLogNeighbourhood:
        return False
    return True


def check_membership(group: GroupDescriptor, X) -> float:
    """Largest violation of the group's defining relations (0 for members)."""
    X = np.asarray(X)
    if X.shape != (group.n, group.n):
        return math.inf
    if not np.all(np.isfinite(X)):
        return math.inf
    kind = group.kind
    if kind == "product":
        res, offset = 0.0, 0
        mask = np.ones(X.shape, dtype=bool)
        for f in group.factors:
            blk = X[offset : offset + f.n, offset : offset + f.n]
            res = max(res, check_membership(f, blk))
            mask[offset : offset + f.n, offset : offset + f.n] = False
            offset += f.n
        if mask.any():
            res = max(res, float(np.max(np.abs(X[mask]))))
        return res
    eye = np.eye(group.n)
    if kind == "SO":
        imag = float(np.max(np.abs(np.imag(X))))
        Xr = np.real(X)
        return max(imag, float(np.max(np.abs(Xr.T @ Xr - eye))), abs(np.linalg.det(Xr) - 1.0))
    if kind == "SU":
        return max(float(np.max(np.abs(X @ X.conj().T - eye))), abs(np.linalg.det(X) - 1.0))
    if kind == "SE2":
        imag = float(np.max(np.abs(np.imag(X))))
        Xr = np.real(X)
        Rm = Xr[:2, :2]
        rot = max(float(np.max(np.abs(Rm.T @ Rm - np.eye(2)))), abs(np.linalg.det(Rm) - 1.0))
        row = float(np.max(np.abs(Xr[2] - np.array([0.0, 0.0, 1.0]))))
        return max(imag, rot, row)
    if kind == "unipotent":
        imag = float(np.max(np.abs(np.imag(X))))
        Xr = np.real(X)
        return max(imag, float(np.max(np.abs(np.tril(Xr) - eye))))
    # custom: Log X must lie in the span of the basis
    try:
        return projection_residual(group, matfun.principal_log(X))
    except EigenvalueOnNegativeRealAxis:
        return math.inf


def commutator(A, B) -> np.ndarray:
    return A @ B - B @ A


def bch_defect(A, B) -> float:
    """``||Log(exp(A) exp(B)) - (A + B)||``, second order in ``||A|| + ||B||``."""
    try:
        Z = matfun.principal_log(matfun.exp_matrix(A) @ matfun.exp_matrix(B))
    except EigenvalueOnNegativeRealAxis as exc:
        raise OutsideLogNeighbourhood(str(exc)) from exc
    return float(np.linalg.norm(Z - (A + B), 2))


def random_algebra_element(group: GroupDescriptor, rng, scale: float = 1.0) -> np.ndarray:
    return algebra_element(group, rng.uniform(-scale, scale, size=group.m))


__all__ = [
    "GroupDescriptor", "SO2", "SO3", "SU2", "SE2", "R", "J",
    "SIGMA1", "SIGMA2", "SIGMA3", "direct_product", "torus", "cylinder",
    "descriptor_from_dict", "algebra_element", "composed_flow",
    "exponential_coordinates", "algebra_coordinates", "projection_residual",
    "check_membership", "bch_defect", "commutator", "in_log_neighbourhood",
]
