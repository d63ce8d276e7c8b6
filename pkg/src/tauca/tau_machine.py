"""Explicit first-order schemes run entirely in tau-radix digits.

Each step forms ``y + tau * f(y)`` as a truncated digit polynomial and then
normalizes it with carries. Two execution paths produce identical traces for
the quadratic test system: the generic one built on :mod:`tauca.tau_arith`
(exact Python integers, any polynomial system) and a compiled kernel with
the digit recursion written out by hand.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .errors import RangeError
from .tau_arith import (
    CarryRecord,
    SignPattern,
    TauNumber,
    TauRadix,
    Term,
    carry_normalize,
    combine,
    encode,
    value,
)

__all__ = [
    "Monomial",
    "PolySystem",
    "MachineState",
    "StepTrace",
    "paper_system",
    "initial_state",
    "euler_step",
    "run",
    "linear_sum_identity",
    "trace_csv",
]

# exponent vector -> integer coefficient
Monomial = tuple[tuple[int, ...], int]

DIGIT_LETTERS = "abcefghijk"
CARRY_LETTERS = "dwxyzqrstp"


def _freeze_poly(poly: Mapping[tuple[int, ...], int] | Sequence[Monomial], dim: int) -> tuple[Monomial, ...]:
    items = poly.items() if isinstance(poly, Mapping) else poly
    merged: dict[tuple[int, ...], int] = {}
    for exps, coef in items:
        exps = tuple(int(e) for e in exps)
        if len(exps) != dim or any(e < 0 for e in exps):
            raise ValueError(f"bad exponent vector {exps!r} for a {dim}-component system")
        if int(coef) != coef:
            raise ValueError(f"coefficients must be integers, got {coef!r}")
        merged[exps] = merged.get(exps, 0) + int(coef)
    return tuple(sorted((e, c) for e, c in merged.items() if c != 0))


@dataclass(frozen=True)
class PolySystem:
    """``dy_i/dt = sum(c * prod(y**e))`` with integer coefficients.

    ``rhs[i]`` maps exponent vectors to coefficients; plain dicts are accepted
    and frozen into sorted tuples.
    """

    dim: int
    rhs: tuple
    initial: tuple[float, ...]
    sign_patterns: tuple[SignPattern, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if not (len(self.rhs) == len(self.initial) == len(self.sign_patterns) == self.dim):
            raise ValueError("rhs, initial and sign_patterns need one entry per component")
        object.__setattr__(self, "rhs", tuple(_freeze_poly(p, self.dim) for p in self.rhs))
        object.__setattr__(self, "initial", tuple(float(x) for x in self.initial))
        patterns = tuple(s if isinstance(s, SignPattern) else SignPattern(tuple(s)) for s in self.sign_patterns)
        object.__setattr__(self, "sign_patterns", patterns)
        names = tuple(self.names) or tuple(f"y{i}" for i in range(self.dim))
        if len(names) != self.dim:
            raise ValueError("names needs one entry per component")
        object.__setattr__(self, "names", names)

    @property
    def degree(self) -> int:
        return max((sum(e) for poly in self.rhs for e, _ in poly), default=0)

    def evaluate(self, y: Sequence[float]) -> np.ndarray:
        out = np.zeros(self.dim)
        for i, poly in enumerate(self.rhs):
            for exps, coef in poly:
                out[i] += coef * np.prod([y[k] ** e for k, e in enumerate(exps)])
        return out

    def packed(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(coefs, exps, comp)`` arrays for the compiled float kernels."""
        rows = [(c, e, i) for i, poly in enumerate(self.rhs) for e, c in poly]
        coefs = np.array([r[0] for r in rows], dtype=np.float64)
        exps = np.array([r[1] for r in rows], dtype=np.int64).reshape(len(rows), self.dim)
        comp = np.array([r[2] for r in rows], dtype=np.int64)
        return coefs, exps, comp

    def is_paper_system(self) -> bool:
        return self == paper_system()


def paper_system() -> PolySystem:
    """du/dt = v^2 - u^2, dv/dt = u^2 - 2v with u(0) = 1, v(0) = 0."""
    return PolySystem(
        dim=2,
        rhs=(
            {(0, 2): 1, (2, 0): -1},
            {(2, 0): 1, (0, 1): -2},
        ),
        initial=(1.0, 0.0),
        sign_patterns=(SignPattern((1, -1, 1, -1)), SignPattern((1, 1, -1, 1))),
        names=("u", "v"),
    )


@dataclass(frozen=True)
class MachineState:
    step_index: int
    components: tuple[TauNumber, ...]

    def __post_init__(self):
        radii = {c.radix for c in self.components}
        if len(radii) > 1:
            raise ValueError("all components must share radix and p")

    @property
    def radix(self) -> TauRadix:
        return self.components[0].radix

    def values(self) -> np.ndarray:
        return np.array([value(c) for c in self.components])


def _fit_signs(signs: SignPattern, radix: TauRadix) -> SignPattern:
    """Extend or cut a sign pattern to p+1 entries, continuing its alternation."""
    betas = list(signs.betas[: radix.width])
    while len(betas) < radix.width:
        if len(betas) >= 2:
            betas.append(betas[-2])
        else:
            betas.append(-betas[-1])
    return SignPattern(tuple(betas))


def initial_state(sys: PolySystem, radix: TauRadix) -> MachineState:
    comps = tuple(
        encode(y0, radix, _fit_signs(s, radix)) for y0, s in zip(sys.initial, sys.sign_patterns)
    )
    return MachineState(0, comps)


def _rhs_terms(poly, state: Sequence[TauNumber]) -> list[Term]:
    terms = []
    for exps, coef in poly:
        factors = tuple(f for k, e in enumerate(exps) for f in (state[k],) * e)
        terms.append(Term(coef, 1, factors))
    return terms


def euler_step(state: MachineState, sys: PolySystem) -> tuple[MachineState, tuple[CarryRecord, ...]]:
    """One step ``y + tau * f(y)`` per component, truncated at p and normalized.

    Raises:
        RangeError: if a carry leaves digit 0 of any component.
    """
    comps = state.components
    new, records = [], []
    for i, poly in enumerate(sys.rhs):
        old = comps[i]
        raw = combine([Term(1, 0, (old,))] + _rhs_terms(poly, comps), signs=old.signs, radix=old.radix)
        number, record = carry_normalize(raw)
        if record.overflow0 != 0:
            raise RangeError(
                f"component {sys.names[i]!r} overflowed digit 0 (carry {record.overflow0})",
                step=state.step_index,
            )
        new.append(number)
        records.append(record)
    return MachineState(state.step_index + 1, tuple(new)), tuple(records)


@dataclass
class StepTrace:
    """Digits and carries of one run.

    ``digits[n, c, i]`` is digit i of component c after n steps (shape
    ``(steps + 1, dim, p + 1)``); ``carries[n, c, i]`` is the carry out of
    digit i produced by the step from n to n+1 (shape ``(steps, dim, p + 1)``).
    """

    radix: TauRadix
    signs: tuple[SignPattern, ...]
    digits: np.ndarray
    carries: np.ndarray
    names: tuple[str, ...] = field(default=())

    def __len__(self) -> int:
        return self.carries.shape[0]

    @property
    def steps(self) -> int:
        return len(self)

    @property
    def N(self) -> int:
        return self.radix.N

    def values(self) -> np.ndarray:
        """Float value of every component after every step, shape ``(steps + 1, dim)``."""
        N, p = self.radix.N, self.radix.p
        weights = np.array([float(N) ** -i for i in range(p + 1)])
        betas = np.array([s.betas for s in self.signs], dtype=np.float64)
        return np.einsum("ncd,cd,d->nc", self.digits.astype(np.float64), betas, weights)

    def state(self, n: int) -> MachineState:
        comps = tuple(
            TauNumber(self.radix, s, tuple(int(d) for d in self.digits[n, c]))
            for c, s in enumerate(self.signs)
        )
        return MachineState(n, comps)

    def into_digit0(self) -> np.ndarray:
        """Carries from digit 1 into digit 0, shape ``(steps, dim)``."""
        return self.carries[:, :, 1]


def _run_generic(sys: PolySystem, radix: TauRadix, n_steps: int) -> StepTrace:
    state = initial_state(sys, radix)
    signs = tuple(c.signs for c in state.components)
    digits = np.zeros((n_steps + 1, sys.dim, radix.width), dtype=np.int64)
    carries = np.zeros((n_steps, sys.dim, radix.width), dtype=np.int64)
    digits[0] = [c.digits for c in state.components]
    for n in range(n_steps):
        state, records = euler_step(state, sys)
        digits[n + 1] = [c.digits for c in state.components]
        carries[n] = [r.carries for r in records]
    return StepTrace(radix, signs, digits, carries, sys.names)


# int64 headroom for the compiled recursion: raw digits stay below ~8 N^2.
_EXPLICIT_MAX_N = 10**8


def _run_explicit(sys: PolySystem, radix: TauRadix, n_steps: int) -> StepTrace:
    if not sys.is_paper_system() or radix.p != 3:
        raise ValueError("the explicit path only covers the built-in quadratic system at p = 3")
    if radix.N > _EXPLICIT_MAX_N:
        raise ValueError(f"explicit path supports N <= {_EXPLICIT_MAX_N}; use method='generic'")
    state = initial_state(sys, radix)
    signs = tuple(c.signs for c in state.components)
    digits = np.zeros((n_steps + 1, 2, 4), dtype=np.int64)
    carries = np.zeros((n_steps, 2, 4), dtype=np.int64)
    u0 = np.array(state.components[0].digits, dtype=np.int64)
    v0 = np.array(state.components[1].digits, dtype=np.int64)
    failed = kernels.system4_run(radix.N, n_steps, u0, v0, digits, carries)
    if failed >= 0:
        raise RangeError("a carry left digit 0", step=int(failed))
    return StepTrace(radix, signs, digits, carries, sys.names)


def run(sys: PolySystem, radix: TauRadix, n_steps: int, method: str = "auto") -> StepTrace:
    """Iterate :func:`euler_step` ``n_steps`` times from the encoded initial state.

    ``method`` is ``"generic"``, ``"explicit"`` (built-in system, p = 3 only) or
    ``"auto"``, which takes the explicit path whenever it applies.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    if method == "auto":
        method = "explicit" if sys.is_paper_system() and radix.p == 3 and radix.N <= _EXPLICIT_MAX_N else "generic"
    if method == "generic":
        return _run_generic(sys, radix, n_steps)
    if method == "explicit":
        return _run_explicit(sys, radix, n_steps)
    raise ValueError(f"unknown method {method!r}")


def _linear_increment(sys: PolySystem, trace: StepTrace) -> np.ndarray:
    """Integer tau^1 coefficient that tau*f adds to each digit 1, per step.

    Only the leading digits enter: f evaluated at the digit-0 values, times
    the sign of digit 1. Shape ``(steps, dim)``.
    """
    lead = trace.digits[:-1, :, 0] * np.array([s.betas[0] for s in trace.signs])
    inc = np.zeros((trace.steps, sys.dim), dtype=np.int64)
    for i, poly in enumerate(sys.rhs):
        for exps, coef in poly:
            term = np.full(trace.steps, coef, dtype=np.int64)
            for k, e in enumerate(exps):
                term = term * lead[:, k] ** e
            inc[:, i] += term
        inc[:, i] *= trace.signs[i].betas[1]
    return inc


def linear_sum_identity(trace: StepTrace, sys: PolySystem | None = None) -> tuple[bool, ...]:
    """Does digit 1 equal the running sum of its increments minus carries?

    For the built-in system this is ``a_{1,n+1} = sum_{m<=n} (1 - delta_{2,m})``
    and the same for b with omega. In general the increment is read from
    :func:`_linear_increment` and the carry enters with sign
    ``beta_1 * beta_2``.
    """
    if sys is None:
        sys = paper_system()
    if trace.steps == 0:
        raise ValueError("trace has no steps")
    if trace.radix.p < 2:
        raise ValueError("identity needs p >= 2")
    inc = _linear_increment(sys, trace)
    out = []
    for c, s in enumerate(trace.signs):
        per_step = inc[:, c] + s.betas[1] * s.betas[2] * trace.carries[:, c, 2]
        expected = trace.digits[0, c, 1] + np.cumsum(per_step)
        out.append(bool(np.array_equal(trace.digits[1:, c, 1], expected)))
    return tuple(out)


def trace_csv(trace: StepTrace) -> str:
    """Digits 1..p and carries 2..p per step.

    For the built-in system the header is ``n,a1,a2,a3,b1,b2,b3,d2,d3,w2,w3``.
    The last row has empty carry cells: no step leaves the final state.
    """
    p = trace.radix.p
    dim = trace.digits.shape[1]
    header = ["n"]
    for c in range(dim):
        header += [f"{DIGIT_LETTERS[c]}{i}" for i in range(1, p + 1)]
    for c in range(dim):
        header += [f"{CARRY_LETTERS[c]}{i}" for i in range(2, p + 1)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for n in range(trace.digits.shape[0]):
        row = [n]
        for c in range(dim):
            row += [int(d) for d in trace.digits[n, c, 1:]]
        for c in range(dim):
            if n < trace.steps:
                row += [int(x) for x in trace.carries[n, c, 2:]]
            else:
                row += [""] * (p - 1)
        writer.writerow(row)
    buf.write(f"# N={trace.radix.N} p={p} steps={trace.steps}\n")
    return buf.getvalue()
