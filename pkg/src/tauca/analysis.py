"""Error statistics: carry averaging, power-law fits, curve errors, LCG moments."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .ca_solver import CaCurve, expected_delta, expected_omega
from .errors import DegenerateFitError, EmptyTraceError, GridError
from .oracle import Trajectory, sample
from .tau_machine import StepTrace

__all__ = [
    "ErrorReport",
    "LcgParams",
    "MINSTD",
    "fit_power_law",
    "valid_prefix",
    "carry_sequences",
    "lln_errors",
    "lln_error",
    "lcg_stream",
    "moment_stats",
    "curve_error",
    "error_report",
    "report_csv",
]


@dataclass(frozen=True)
class ErrorReport:
    """Errors against an increasing abscissa with a fitted ``error ~ C x**k``.

    ``zero_xs`` lists abscissae whose error was exactly zero; they are kept out
    of the log-log fit. ``tau_constant`` is set by :func:`lln_error`: the
    smallest C with ``error <= 1/x + C tau`` at every step n up to the usable prefix.
    """

    xs: np.ndarray
    errors: np.ndarray
    fitted_exponent: float
    fitted_constant: float
    zero_xs: tuple = ()
    tau_constant: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.xs.shape != self.errors.shape:
            raise ValueError("xs and errors must match")
        if np.any(np.diff(self.xs) <= 0):
            raise ValueError("xs must be strictly increasing")
        if not np.all(np.isfinite(self.errors)) or np.any(self.errors < 0):
            raise ValueError("errors must be finite and non-negative")


def fit_power_law(xs, errors) -> tuple[float, float]:
    """Least-squares line through ``(log x, log e)``; returns ``(slope, exp(intercept))``."""
    xs = np.asarray(xs, dtype=np.float64)
    errors = np.asarray(errors, dtype=np.float64)
    if xs.size < 3:
        raise DegenerateFitError(f"need at least 3 points, got {xs.size}")
    if np.any(errors <= 0) or np.any(xs <= 0):
        raise DegenerateFitError("power-law fit needs strictly positive x and errors")
    slope, intercept = np.polyfit(np.log(xs), np.log(errors), 1)
    return float(slope), float(np.exp(intercept))


def error_report(xs, errors, **extra) -> ErrorReport:
    """Fit the positive entries and record exact zeros separately."""
    xs = np.asarray(xs, dtype=np.float64)
    errors = np.asarray(errors, dtype=np.float64)
    pos = errors > 0
    zero_xs = tuple(float(x) for x in xs[~pos])
    k, c = fit_power_law(xs[pos], errors[pos])
    return ErrorReport(xs, errors, k, c, zero_xs, **extra)


def valid_prefix(trace: StepTrace) -> int:
    """Number of leading steps with no carry into digit 0 in any component.

    Past that point the leading digits change and the linear digits no
    longer count layers from the initial value.
    """
    bad = np.flatnonzero(np.any(trace.into_digit0() != 0, axis=1))
    return int(bad[0]) if bad.size else trace.steps


def carry_sequences(trace: StepTrace, carry: str = "delta") -> tuple[np.ndarray, np.ndarray]:
    """Recorded carries out of digit 2 and their expected values, per step.

    Expectations are taken at the trace's own ``(a_1, b_1)`` digits:
    ``1 - E_delta(a, b)`` for u's carry, ``1 - E_omega(a, b)`` for v's.
    """
    N = trace.radix.N
    a = trace.digits[:-1, 0, 1].astype(np.float64)
    b = trace.digits[:-1, 1, 1].astype(np.float64)
    if carry == "delta":
        recorded = trace.carries[:, 0, 2]
        expected = 1.0 - expected_delta(a, b, N)
    elif carry == "omega":
        recorded = trace.carries[:, 1, 2]
        expected = 1.0 - expected_omega(a, b, N)
    else:
        raise ValueError("carry must be 'delta' or 'omega'")
    return recorded.astype(np.float64), expected


def lln_errors(recorded, expected) -> np.ndarray:
    """``e_n = |mean(recorded[:n]) - mean(expected[:n])|`` for n = 1..len."""
    recorded = np.asarray(recorded, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    n = np.arange(1, recorded.size + 1)
    return np.abs(np.cumsum(recorded - expected)) / n


def lln_error(trace: StepTrace, N: int | None = None, carry: str = "delta", max_n: int | None = None) -> ErrorReport:
    """Averaging error of one carry sequence on a power-of-two grid of n.

    Only the prefix before the first carry into digit 0 is used (see
    :func:`valid_prefix`), further capped at ``max_n``.
    """
    if N is None:
        N = trace.radix.N
    if N != trace.radix.N:
        raise ValueError(f"N={N} does not match the trace radix {trace.radix.N}")
    if trace.steps == 0:
        raise EmptyTraceError("trace has no steps")
    usable = valid_prefix(trace)
    if max_n is not None:
        usable = min(usable, max_n)
    if usable == 0:
        raise EmptyTraceError("first step already carries into digit 0")
    recorded, expected = carry_sequences(trace, carry)
    e = lln_errors(recorded[:usable], expected[:usable])
    ns = 2 ** np.arange(int(np.log2(usable)) + 1)
    errs = e[ns - 1]
    tau_c = float(max(0.0, np.max((e - 1.0 / np.arange(1, usable + 1)) * N)))
    return error_report(ns, errs, tau_constant=tau_c, meta={"N": N, "carry": carry, "steps_used": usable})


@dataclass(frozen=True)
class LcgParams:
    b: int
    c: int
    P: int
    seed: int

    def __post_init__(self):
        if self.P < 2:
            raise ValueError("modulus P must be at least 2")
        if not (0 <= self.b < self.P and 0 <= self.c < self.P):
            raise ValueError("multiplier and increment must lie in [0, P)")
        if not 0 <= self.seed < self.P:
            raise ValueError("seed must lie in [0, P)")
        # b * x must fit in int64 for the compiled kernel
        if (self.P - 1) * (self.b + 1) >= 2**63:
            raise ValueError("b * P exceeds 64-bit range")


MINSTD = LcgParams(b=16807, c=0, P=2**31 - 1, seed=1)


def lcg_stream(params: LcgParams, count: int) -> np.ndarray:
    """``x_m = (b x_{m-1} + c) mod P`` for m = 1..count (the seed is not emitted)."""
    if count < 0:
        raise ValueError("count must be non-negative")
    out = np.empty(count, dtype=np.int64)
    kernels.lcg_stream(params.b, params.c, params.P, params.seed, count, out)
    return out


def moment_stats(xs) -> tuple[float, float]:
    """Sample mean and unbiased sample variance."""
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size < 2:
        raise ValueError("need at least two samples")
    return float(xs.mean()), float(xs.var(ddof=1))


def curve_error(curve: CaCurve, ref: Trajectory, t_max: float) -> float:
    """Largest Euclidean distance between curve points with t <= t_max and the reference."""
    if curve.t[-1] < t_max:
        raise GridError(f"curve ends at t={curve.t[-1]} before t_max={t_max}")
    if ref.t_end < t_max:
        raise GridError(f"reference ends at t={ref.t_end} before t_max={t_max}")
    mask = curve.t <= t_max
    y = sample(ref, curve.t[mask])
    d = np.hypot(curve.u[mask] - y[:, 0], curve.v[mask] - y[:, 1])
    return float(d.max())


def report_csv(report: ErrorReport, extra_footer: dict | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "error"])
    for x, e in zip(report.xs, report.errors):
        writer.writerow([format(float(x), ".17g"), format(float(e), ".17g")])
    buf.write(f"# exponent={report.fitted_exponent!r} constant={report.fitted_constant!r}\n")
    footer = dict(extra_footer or {})
    if report.tau_constant is not None:
        footer.setdefault("tau_constant", report.tau_constant)
    if report.zero_xs:
        footer.setdefault("zero_xs", ";".join(format(x, ".17g") for x in report.zero_xs))
    for k, v in footer.items():
        buf.write(f"# {k}={v!r}\n" if isinstance(v, float) else f"# {k}={v}\n")
    return buf.getvalue()
