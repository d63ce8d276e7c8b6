"""Exact digit arithmetic in the positional system with radix N = 1/tau.

A number is a vector of p+1 integer digits a_0..a_p with a fixed sign per
position, representing ``sum(beta_i * a_i * N**-i)``. Digits are Python ints,
so every operation here is exact; floats only appear in :func:`value`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import MixedRadixError, RangeError, SignError

__all__ = [
    "TauRadix",
    "SignPattern",
    "TauNumber",
    "RawTauNumber",
    "CarryRecord",
    "Term",
    "value",
    "exact_value",
    "encode",
    "carry_normalize",
    "combine",
    "signed_coefficients",
]


@dataclass(frozen=True)
class TauRadix:
    """Radix ``N`` (so tau = 1/N) and highest retained power ``p``."""

    N: int
    p: int = 3

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 2:
            raise ValueError(f"radix N must be an integer >= 2, got {self.N!r}")
        if not isinstance(self.p, int) or self.p < 1:
            raise ValueError(f"power p must be an integer >= 1, got {self.p!r}")

    @property
    def tau(self) -> Fraction:
        return Fraction(1, self.N)

    @property
    def width(self) -> int:
        return self.p + 1


@dataclass(frozen=True)
class SignPattern:
    """Per-position signs beta_0..beta_p, each +1 or -1."""

    betas: tuple[int, ...]

    def __post_init__(self):
        betas = tuple(int(b) for b in self.betas)
        if not betas or any(b not in (-1, 1) for b in betas):
            raise ValueError(f"sign pattern entries must be +1 or -1, got {self.betas!r}")
        object.__setattr__(self, "betas", betas)

    @classmethod
    def parse(cls, text: str) -> "SignPattern":
        """Build from a string such as ``"+-+-"``."""
        lookup = {"+": 1, "-": -1}
        try:
            return cls(tuple(lookup[ch] for ch in text))
        except KeyError:
            raise ValueError(f"sign pattern must contain only '+' and '-', got {text!r}") from None

    def __len__(self) -> int:
        return len(self.betas)

    def __getitem__(self, i):
        return self.betas[i]

    def __str__(self) -> str:
        return "".join("+" if b > 0 else "-" for b in self.betas)


def _check_shape(radix: TauRadix, signs: SignPattern, digits: Sequence[int]) -> None:
    if len(signs) != radix.width:
        raise ValueError(f"sign pattern has length {len(signs)}, expected p+1 = {radix.width}")
    if len(digits) != radix.width:
        raise ValueError(f"digit vector has length {len(digits)}, expected p+1 = {radix.width}")


@dataclass(frozen=True)
class TauNumber:
    """Normalized number: every digit lies in ``[0, N)``."""

    radix: TauRadix
    signs: SignPattern
    digits: tuple[int, ...]

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        _check_shape(self.radix, self.signs, digits)
        N = self.radix.N
        for i, d in enumerate(digits):
            if not 0 <= d < N:
                raise ValueError(f"digit {i} = {d} is not normalized (must lie in [0, {N}))")
        object.__setattr__(self, "digits", digits)

    def __float__(self) -> float:
        return value(self)


@dataclass(frozen=True)
class RawTauNumber:
    """Pre-carry number: signed digits with no range restriction."""

    radix: TauRadix
    signs: SignPattern
    raw_digits: tuple[int, ...]

    def __post_init__(self):
        digits = tuple(int(d) for d in self.raw_digits)
        _check_shape(self.radix, self.signs, digits)
        object.__setattr__(self, "raw_digits", digits)


@dataclass(frozen=True)
class CarryRecord:
    """Carries produced by one normalization.

    ``carries[i]`` is the amount carried out of digit ``i`` into digit ``i-1``;
    ``carries[0]`` leaves the representation and is repeated as ``overflow0``.
    """

    carries: tuple[int, ...]
    overflow0: int

    @property
    def into_digit0(self) -> int:
        """Carry that moved from digit 1 into digit 0."""
        return self.carries[1] if len(self.carries) > 1 else 0


Number = Union[TauNumber, RawTauNumber]


def _digits_of(x: Number) -> tuple[int, ...]:
    return x.digits if isinstance(x, TauNumber) else x.raw_digits


def signed_coefficients(x: Number) -> list[int]:
    """Integer coefficients c_i of tau**i, i.e. ``beta_i * digit_i``."""
    return [b * d for b, d in zip(x.signs.betas, _digits_of(x))]


def exact_value(x: Number) -> Fraction:
    """Represented value as an exact rational."""
    N = x.radix.N
    p = x.radix.p
    # Horner in integers, one division at the end.
    numerator = 0
    for c in signed_coefficients(x):
        numerator = numerator * N + c
    return Fraction(numerator, N**p)


def value(x: Number) -> float:
    """Represented value ``sum(beta_i * digit_i * N**-i)`` as a float."""
    return float(exact_value(x))


def _span(radix: TauRadix, signs: SignPattern) -> tuple[int, int]:
    """Smallest and largest integer ``sum(beta_i a_i N**(p-i))`` over normalized digits."""
    lo = hi = 0
    for i, b in enumerate(signs.betas):
        weight = (radix.N - 1) * radix.N ** (radix.p - i)
        if b > 0:
            hi += weight
        else:
            lo -= weight
    return lo, hi


def encode(x: float | Fraction, radix: TauRadix, signs: SignPattern) -> TauNumber:
    """Nearest normalized representation of ``x``.

    With digits restricted to ``[0, N)`` the map from digit vectors to the
    integers ``k = value * N**p`` is a bijection onto a contiguous range, so
    the nearest representable value is ``round(x * N**p)`` and its digits follow
    from floored division, least significant first. The absolute error is at
    most ``N**-p / 2``.

    Raises:
        RangeError: if ``|x| >= N``.
        SignError: if ``x`` falls outside the range the sign pattern covers.
    """
    if len(signs) != radix.width:
        raise ValueError(f"sign pattern has length {len(signs)}, expected p+1 = {radix.width}")
    q = Fraction(x)
    if abs(q) >= radix.N:
        raise RangeError(f"|x| = {float(abs(q))} is not below the radix N = {radix.N}")
    scaled = q * radix.N**radix.p
    k = math.floor(scaled + Fraction(1, 2))
    lo, hi = _span(radix, signs)
    if not lo <= k <= hi:
        raise SignError(
            f"x = {float(q)} needs a negative digit under sign pattern {signs} "
            f"(representable range [{lo / radix.N**radix.p}, {hi / radix.N**radix.p}])"
        )
    digits = [0] * radix.width
    rest = k
    for i in range(radix.p, -1, -1):
        b = signs.betas[i]
        d = (b * rest) % radix.N
        digits[i] = d
        rest = (rest - b * d) // radix.N
    assert rest == 0
    return TauNumber(radix, signs, tuple(digits))


def carry_normalize(x: RawTauNumber) -> tuple[TauNumber, CarryRecord]:
    """Bring every digit into ``[0, N)`` by carrying toward digit 0.

    Starting at digit p, ``s = raw_i + beta_i*beta_{i+1}*carry_{i+1}``; the new
    digit is ``s mod N`` and the carry out is ``floor(s / N)``. The carry out
    of digit 0 is reported as ``overflow0`` and is otherwise dropped, so the
    value is preserved exactly only when ``overflow0 == 0``.
    """
    N = x.radix.N
    betas = x.signs.betas
    raw = x.raw_digits
    width = len(raw)
    digits = [0] * width
    carries = [0] * width
    carry = 0
    for i in range(width - 1, -1, -1):
        s = raw[i]
        if i < width - 1:
            s += betas[i] * betas[i + 1] * carry
        carry, digits[i] = divmod(s, N)
        carries[i] = carry
    return TauNumber(x.radix, x.signs, tuple(digits)), CarryRecord(tuple(carries), carries[0])


@dataclass(frozen=True)
class Term:
    """``coefficient * tau**tau_power * prod(factors)``."""

    coefficient: int
    tau_power: int = 0
    factors: tuple[TauNumber, ...] = ()


def _poly_mul(a: list[int], b: list[int], keep: int) -> list[int]:
    out = [0] * keep
    for i, ai in enumerate(a):
        if ai == 0 or i >= keep:
            continue
        for j, bj in enumerate(b):
            if i + j >= keep:
                break
            out[i + j] += ai * bj
    return out


def combine(
    terms: Iterable[Term | tuple],
    signs: SignPattern | None = None,
    radix: TauRadix | None = None,
) -> RawTauNumber:
    """Evaluate a polynomial in TauNumbers as a raw, truncated digit vector.

    Each term is a :class:`Term` or a tuple ``(coefficient, tau_power, factors)``.
    Products are expanded in exact integer coefficients of tau and every power
    above ``p`` is dropped before the result is expressed in ``signs``. Both
    ``signs`` and ``radix`` default to those of the first factor found.

    Raises:
        MixedRadixError: if factors disagree on N or p, or with ``radix``.
    """
    terms = [t if isinstance(t, Term) else Term(int(t[0]), int(t[1]), tuple(t[2])) for t in terms]
    factors = [f for t in terms for f in t.factors]
    if radix is None:
        if not factors:
            raise ValueError("combine needs an explicit radix when no term has factors")
        radix = factors[0].radix
    if signs is None:
        if not factors:
            raise ValueError("combine needs an explicit sign pattern when no term has factors")
        signs = factors[0].signs
    for f in factors:
        if f.radix != radix:
            raise MixedRadixError(f"operand radix {f.radix} differs from {radix}")
    if len(signs) != radix.width:
        raise MixedRadixError(f"sign pattern length {len(signs)} does not match p+1 = {radix.width}")

    keep = radix.width
    total = [0] * keep
    for term in terms:
        if term.tau_power < 0:
            raise ValueError("tau_power must be non-negative")
        if term.tau_power >= keep or term.coefficient == 0:
            continue
        width = keep - term.tau_power
        poly = [1] + [0] * (width - 1)
        for f in term.factors:
            poly = _poly_mul(poly, signed_coefficients(f), width)
        for k, c in enumerate(poly):
            total[k + term.tau_power] += term.coefficient * c
    raw = tuple(b * c for b, c in zip(signs.betas, total))
    return RawTauNumber(radix, signs, raw)
