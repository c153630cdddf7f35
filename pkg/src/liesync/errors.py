"""Exception types raised across the package."""

from __future__ import annotations


class LieSyncError(Exception):
    """Base class for all errors raised by :mod:`liesync`."""


class DomainError(LieSyncError, ValueError):
    """An argument lies outside the domain of an operation."""


class NonFiniteMatrix(DomainError):
    pass


class EigenvalueOnNegativeRealAxis(DomainError):
    """The principal logarithm is undefined: an eigenvalue lies on the closed
    negative real axis (zero included)."""

    def __init__(self, eigenvalue: complex, message: str | None = None):
        self.eigenvalue = eigenvalue
        super().__init__(
            message or f"eigenvalue {eigenvalue!r} lies on the closed negative real axis"
        )


class ZeroGain(DomainError):
    def __init__(self, message: str = "gain K must be nonzero"):
        super().__init__(message)


class OutsideLogNeighbourhood(DomainError):
    """Element is not in the neighbourhood U on which Log inverts exp."""


class Disconnected(DomainError):
    """The zero Laplacian eigenvalue is not simple."""


class DeadbeatGain(DomainError):
    """K equals N on a complete graph: synchronization happens in one step."""

    settling_time = 1


class Unstable(DomainError):
    """The complete-graph error exponent |K - N| / K is not below one."""


class NotApplicable(DomainError):
    pass


class ControllerUndefined(LieSyncError, ArithmeticError):
    """The neighbour product of some agent has an eigenvalue on the closed
    negative real axis, so its control input cannot be formed."""

    def __init__(self, agent: int, step: int | None = None, eigenvalue: complex | None = None):
        self.agent = agent
        self.step = step
        self.eigenvalue = eigenvalue
        where = f"agent {agent}" if step is None else f"agent {agent} at step {step}"
        super().__init__(f"controller undefined for {where} (eigenvalue {eigenvalue!r} on R^-)")


class LeftGroup(LieSyncError, ArithmeticError):
    """A state drifted off its group beyond tolerance."""

    def __init__(self, step: int, residual: float):
        self.step = step
        self.residual = residual
        super().__init__(f"membership residual {residual:.3e} at step {step}")
