"""Averaged solver: carries replaced by their expected values.

The linear digit ``a`` of u is the independent variable. Layer ``a`` lasts
``1 / E_delta`` machine steps, during which b gains ``E_omega / E_delta``.
Three curve variants are produced:

``full``
    the layer recursion with both expectations evaluated at the current
    ``(a, b_a)``;
``closed``
    the explicit sums: ``t_a = tau * sum 1/(1 - m tau)^2`` and the
    sum-of-products formula for ``v_a`` (both drop the ``b^2 tau^2`` part of
    ``E_delta``);
``asymptotic``
    the small-t approximation with denominators ``1 - 2 m tau``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import GridError, RangeError

__all__ = [
    "EPS_STOP",
    "VARIANTS",
    "CaCurve",
    "LayerTimes",
    "Extrapolation",
    "expected_delta",
    "expected_omega",
    "layer_times",
    "v_layers",
    "v_layers_recurrence",
    "full_layers",
    "asymptotic_curve",
    "solve",
    "solve_to_time",
    "limit_extrapolate",
    "curve_csv",
]

EPS_STOP = 1e-6
VARIANTS = ("full", "closed", "asymptotic")


def expected_delta(a, b, N):
    """Expected ``1 - delta_2`` on layer (a, b): ``(1 - a/N)^2 - (b/N)^2``."""
    return (1.0 - a / N) ** 2 - (b / N) ** 2


def expected_omega(a, b, N):
    """Expected ``1 - omega_2`` on layer (a, b): ``(1 - a/N)^2 - 2b/N``."""
    return (1.0 - a / N) ** 2 - 2.0 * b / N


@dataclass(frozen=True)
class CaCurve:
    """Layer points ``(a, n_a, t_a, u_a, v_a)`` of one solve."""

    N: int
    variant: str
    a: np.ndarray
    n: np.ndarray
    t: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __len__(self) -> int:
        return self.a.shape[0]

    @property
    def tau(self) -> float:
        return 1.0 / self.N

    def at(self, times) -> np.ndarray:
        """(u, v) linearly interpolated in t, shape ``(len(times), 2)``."""
        times = np.asarray(times, dtype=np.float64)
        if times.size and (times.min() < self.t[0] or times.max() > self.t[-1]):
            raise GridError(f"N={self.N} curve covers t in [{self.t[0]}, {self.t[-1]}], asked for up to {times.max()}")
        return np.column_stack([np.interp(times, self.t, self.u), np.interp(times, self.t, self.v)])


@dataclass(frozen=True)
class LayerTimes:
    """Both time maps side by side.

    ``n_closed``/``t_closed`` use ``E_delta = (1 - a tau)^2``;
    ``n_exact``/``t_exact`` use the full ``E_delta(a, b_a)`` with ``b_a`` taken
    from the sum-of-products formula.
    """

    a: np.ndarray
    n_closed: np.ndarray
    t_closed: np.ndarray
    n_exact: np.ndarray
    t_exact: np.ndarray


def _check_extent(a_max: int, N: int) -> None:
    if N < 2:
        raise ValueError("N must be at least 2")
    if a_max < 0:
        raise ValueError("a_max must be non-negative")
    if a_max >= N:
        raise RangeError(f"a_max = {a_max} must stay below N = {N} (u = 1 - a/N > 0)")


def v_layers(a_max: int, N: int) -> np.ndarray:
    """``v_a = tau + tau * sum_{m=1}^{a-1} prod_{k=m+1}^{a-1} (1 - 2 tau / (1 - k tau)^2)``.

    ``v_0 = 0``. Returns ``a_max + 1`` values.
    """
    _check_extent(a_max, N)
    return kernels.v_sum_of_products(a_max, N)


def v_layers_recurrence(a_max: int, N: int) -> np.ndarray:
    """Same values as :func:`v_layers` from a one-pass recurrence.

    With ``c_a = b_a - 1`` for ``a >= 1``: ``c_1 = 0`` and
    ``c_{a+1} = c_a (1 - 2 tau / (1 - a tau)^2) + 1``.
    """
    _check_extent(a_max, N)
    tau = 1.0 / N
    b = np.zeros(a_max + 1)
    if a_max >= 1:
        b[1] = 1.0
    for a in range(1, a_max):
        b[a + 1] = (b[a] - 1.0) * (1.0 - 2.0 * tau / (1.0 - a * tau) ** 2) + 2.0
    return b * tau


def layer_times(a_max: int, N: int, eps_stop: float = EPS_STOP) -> LayerTimes:
    """Cumulative step counts and times per layer, closed form and exact recursion."""
    _check_extent(a_max, N)
    tau = 1.0 / N
    a = np.arange(a_max + 1)
    lead = (1.0 - np.arange(a_max) * tau) ** 2
    b = v_layers(a_max, N) * N
    e_exact = expected_delta(np.arange(a_max), b[:-1], N)
    for e, label in ((lead, "closed"), (e_exact, "exact")):
        bad = np.flatnonzero(e <= eps_stop)
        if bad.size:
            raise RangeError(f"E_delta fell to {e[bad[0]]:.3g} at layer a={bad[0]} ({label} time map)")
    n_closed = np.concatenate([[0.0], np.cumsum(1.0 / lead)])
    n_exact = np.concatenate([[0.0], np.cumsum(1.0 / e_exact)])
    return LayerTimes(a, n_closed, n_closed * tau, n_exact, n_exact * tau)


def full_layers(a_max: int, N: int, eps_stop: float = EPS_STOP) -> tuple[np.ndarray, np.ndarray]:
    """``(n_a, b_a)`` from the layer recursion with both expectations at ``(a, b_a)``."""
    _check_extent(a_max, N)
    n = np.zeros(a_max + 1)
    b = np.zeros(a_max + 1)
    stop = kernels.expected_layers(a_max, N, eps_stop, n, b)
    if stop >= 0:
        raise RangeError(f"E_delta fell below {eps_stop} at layer a={stop}")
    return n, b


def asymptotic_curve(a_max: int, N: int) -> CaCurve:
    """Small-t form.

    ``v_a = tau + tau (1 - 2 tau (a+1)) sum_{m=2}^{a} 1/(1 - 2 m tau)`` and
    ``t_a = tau sum_{m=0}^{a-1} 1/(1 - 2 m tau)``; needs ``2 a_max < N``.
    """
    _check_extent(a_max, N)
    if 2 * a_max >= N:
        raise RangeError(f"asymptotic form needs 2*a_max < N (got a_max={a_max}, N={N})")
    tau = 1.0 / N
    a = np.arange(a_max + 1)
    inv = 1.0 / (1.0 - 2.0 * a * tau)
    n = np.concatenate([[0.0], np.cumsum(inv[:-1])])
    # partial sums over m = 2..a
    tail = np.concatenate([[0.0, 0.0], np.cumsum(inv[2:])]) if a_max >= 2 else np.zeros(a_max + 1)
    v = tau + tau * (1.0 - 2.0 * tau * (a + 1)) * tail[: a_max + 1]
    v[0] = 0.0
    return CaCurve(N, "asymptotic", a, n, n * tau, 1.0 - a / N, v)


def solve(a_max: int, N: int, variant: str = "full", eps_stop: float = EPS_STOP) -> CaCurve:
    """Curve of ``a_max + 1`` layer points for the chosen variant."""
    if variant == "asymptotic":
        return asymptotic_curve(a_max, N)
    _check_extent(a_max, N)
    a = np.arange(a_max + 1)
    u = 1.0 - a / N
    if variant == "full":
        n, b = full_layers(a_max, N, eps_stop)
        return CaCurve(N, variant, a, n, n / N, u, b / N)
    if variant == "closed":
        lt = layer_times(a_max, N, eps_stop)
        return CaCurve(N, variant, a, lt.n_closed, lt.t_closed, u, v_layers(a_max, N))
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def solve_to_time(t_max: float, N: int, variant: str = "full", eps_stop: float = EPS_STOP) -> CaCurve:
    """Shortest curve whose last point reaches ``t_max``."""
    limit = (N - 1) // 2 if variant == "asymptotic" else N - 1
    a_max = max(1, min(limit, int(np.ceil(t_max * N))))
    while True:
        curve = solve(a_max, N, variant, eps_stop)
        if curve.t[-1] >= t_max:
            hit = int(np.searchsorted(curve.t, t_max))
            return solve(hit, N, variant, eps_stop)
        if a_max == limit:
            raise RangeError(f"N={N} {variant} curve ends at t={curve.t[-1]:.4g} < t_max={t_max}")
        a_max = min(limit, 2 * a_max)


@dataclass(frozen=True)
class Extrapolation:
    """Richardson limit on a time grid.

    ``order`` holds ``log_r |y_1 - y_2| / |y_2 - y_3|`` per grid point and
    component when three curves were given (nan where the differences vanish).
    """

    grid: np.ndarray
    states: np.ndarray
    Ns: tuple[int, ...]
    order: np.ndarray | None = None


def limit_extrapolate(curves: Sequence[CaCurve], grid) -> Extrapolation:
    """First-order extrapolation ``(r y_fine - y_coarse) / (r - 1)`` from the two finest curves.

    ``r`` is the ratio of their radices (2 for the usual N, 2N, 4N ladder).
    """
    if len(curves) < 2:
        raise ValueError("need at least two curves")
    curves = sorted(curves, key=lambda c: c.N)
    Ns = tuple(c.N for c in curves)
    if len(set(Ns)) != len(Ns):
        raise ValueError(f"curves must have distinct N, got {Ns}")
    grid = np.asarray(grid, dtype=np.float64)
    ys = [c.at(grid) for c in curves]
    coarse, fine = ys[-2], ys[-1]
    r = Ns[-1] / Ns[-2]
    states = (r * fine - coarse) / (r - 1.0)
    order = None
    if len(curves) >= 3:
        d1 = np.abs(ys[-3] - ys[-2])
        d2 = np.abs(ys[-2] - ys[-1])
        ratio = Ns[-2] / Ns[-3]
        with np.errstate(divide="ignore", invalid="ignore"):
            order = np.where((d1 > 0) & (d2 > 0), np.log(d1 / d2) / np.log(ratio), np.nan)
    return Extrapolation(grid, states, Ns, order)


def curve_csv(curve: CaCurve) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["a", "n_a", "t", "u", "v", "variant"])
    for i in range(len(curve)):
        writer.writerow(
            [int(curve.a[i])]
            + [format(float(x), ".17g") for x in (curve.n[i], curve.t[i], curve.u[i], curve.v[i])]
            + [curve.variant]
        )
    buf.write(f"# N={curve.N} points={len(curve)}\n")
    return buf.getvalue()
