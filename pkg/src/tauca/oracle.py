"""Floating-point reference solutions: classical RK4 and plain explicit Euler."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import GridError, NonFiniteError
from .tau_machine import PolySystem

__all__ = ["Trajectory", "rk4_solve", "euler_float", "sample", "trajectory_csv", "DEFAULT_ORACLE_STEP"]

DEFAULT_ORACLE_STEP = 1e-5


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    h: float

    def __post_init__(self):
        if self.times.ndim != 1 or self.states.shape[0] != self.times.shape[0]:
            raise ValueError("times and states must have matching length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def t_end(self) -> float:
        return float(self.times[-1])


def _integrate(kernel, sys: PolySystem, step: float, n_steps: int) -> np.ndarray:
    coefs, exps, comp = sys.packed()
    states = np.empty((n_steps + 1, sys.dim))
    y0 = np.array(sys.initial, dtype=np.float64)
    bad = kernel(y0, float(step), n_steps, coefs, exps, comp, states)
    if bad >= 0:
        raise NonFiniteError(f"state became non-finite at step {bad}")
    return states


def rk4_solve(sys: PolySystem, t_end: float, h: float = DEFAULT_ORACLE_STEP) -> Trajectory:
    """Classical four-stage Runge-Kutta on a uniform grid ending exactly at ``t_end``.

    The step count is ``ceil(t_end / h)`` and the step is shrunk slightly so the
    last node lands on ``t_end``.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    n_steps = math.ceil(t_end / h - 1e-9) if t_end > 0 else 0
    step = t_end / n_steps if n_steps else h
    states = _integrate(kernels.rk4_poly, sys, step, n_steps)
    times = np.arange(n_steps + 1) * step
    if n_steps:
        times[-1] = t_end
    return Trajectory(times, states, step)


def euler_float(sys: PolySystem, n_steps: int, tau: float) -> Trajectory:
    """``y_{n+1} = y_n + tau f(y_n)`` in double precision."""
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    if tau <= 0:
        raise ValueError("tau must be positive")
    states = _integrate(kernels.euler_poly, sys, tau, n_steps)
    return Trajectory(np.arange(n_steps + 1) * tau, states, tau)


def sample(traj: Trajectory, t):
    """Linear interpolation of the state at time(s) ``t``.

    Scalar ``t`` gives a state vector; an array gives shape ``(len(t), dim)``.
    """
    ts = np.atleast_1d(np.asarray(t, dtype=np.float64))
    # allow for the rounding in the last node
    slack = 1e-12 * max(1.0, abs(traj.t_end))
    if ts.size and (ts.min() < traj.times[0] - slack or ts.max() > traj.t_end + slack):
        raise GridError(f"t outside [{traj.times[0]}, {traj.t_end}]")
    out = np.column_stack([np.interp(ts, traj.times, traj.states[:, i]) for i in range(traj.states.shape[1])])
    return out[0] if np.ndim(t) == 0 else out


def trajectory_csv(traj: Trajectory, names=("u", "v"), stride: int = 1) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", *names])
    idx = list(range(0, len(traj), stride))
    if idx[-1] != len(traj) - 1:
        idx.append(len(traj) - 1)
    for i in idx:
        writer.writerow([format(float(traj.times[i]), ".17g")] + [format(float(x), ".17g") for x in traj.states[i]])
    buf.write(f"# h={traj.h!r} nodes={len(traj)} stride={stride}\n")
    return buf.getvalue()
