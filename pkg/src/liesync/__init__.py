"""Sampled-data synchronization of kinematic agents on matrix Lie groups."""

from . import control, graph, lincoord, liegroup, matfun, sim
from .control import ControlConfig, closed_loop_step, controller, error_step, relative_error
from .errors import (
    ControllerUndefined,
    DeadbeatGain,
    Disconnected,
    DomainError,
    EigenvalueOnNegativeRealAxis,
    LeftGroup,
    LieSyncError,
    NotApplicable,
    OutsideLogNeighbourhood,
    Unstable,
    ZeroGain,
)
from .graph import CommGraph, exact_gain_bound, kmin_closed_form, laplacian, region_oracle
from .lincoord import settling_time, stability_verdict, state_matrix
from .liegroup import SE2, SO2, SO3, SU2, composed_flow, exponential_coordinates
from .matfun import exp_matrix, kth_root, principal_log
from .sim import Scenario, preset, run

__version__ = "0.1.0"
