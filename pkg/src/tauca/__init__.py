"""Tau-radix digit machine for explicit finite-difference schemes and the
expected-carry solver built on it."""

from ._accel import HAS_NUMBA
from .ca_solver import CaCurve, asymptotic_curve, expected_delta, expected_omega, layer_times, solve, v_layers
from .errors import (
    DegenerateFitError,
    EmptyTraceError,
    GridError,
    MixedRadixError,
    NonFiniteError,
    RangeError,
    SignError,
    TauCAError,
)
from .oracle import Trajectory, euler_float, rk4_solve, sample
from .tau_arith import (
    CarryRecord,
    RawTauNumber,
    SignPattern,
    TauNumber,
    TauRadix,
    Term,
    carry_normalize,
    combine,
    encode,
    value,
)
from .tau_machine import MachineState, PolySystem, StepTrace, euler_step, linear_sum_identity, paper_system, run

__version__ = "0.1.0"
