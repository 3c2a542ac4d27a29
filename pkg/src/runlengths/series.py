"""Truncated power series in one indeterminate.

Coefficients are either all exact (``Fraction``) or all ``float``; mixing
the two is a :class:`~runlengths.errors.ModeError`, never a silent
promotion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, Sequence

from .errors import ModeError

RATIONAL = "rational"
FLOAT = "float"

DEFAULT_ORDER = 64


def _coerce(x, mode):
    if mode == RATIONAL:
        if isinstance(x, float):
            raise ModeError(f"float {x!r} in a rational series")
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients ``c[0..N]`` of a power series, ``c[n]`` multiplying ``Z**n``."""

    coeffs: tuple
    mode: str = RATIONAL

    def __post_init__(self):
        if self.mode not in (RATIONAL, FLOAT):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.coeffs:
            raise ValueError("a truncated series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(_coerce(c, self.mode) for c in self.coeffs))

    @classmethod
    def constant(cls, c, order: int, mode: str = RATIONAL) -> "TruncatedSeries":
        return cls((c,) + (0,) * order, mode)

    @classmethod
    def one(cls, order: int, mode: str = RATIONAL) -> "TruncatedSeries":
        return cls.constant(1, order, mode)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def _check(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if other.mode != self.mode:
            raise ModeError(f"cannot combine {self.mode} and {other.mode} series")
        return min(self.order, other.order)

    def __add__(self, other):
        n = self._check(other)
        if n is NotImplemented:
            return n
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)), self.mode)

    def __sub__(self, other):
        n = self._check(other)
        if n is NotImplemented:
            return n
        return TruncatedSeries(tuple(a - b for a, b in zip(self.coeffs[: n + 1], other.coeffs)), self.mode)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float)) and not isinstance(other, bool):
            return self.scale(other)
        n = self._check(other)
        if n is NotImplemented:
            return n
        a, b = self.coeffs, other.coeffs
        zero = a[0] * 0
        out = []
        for k in range(n + 1):
            s = zero
            for j in range(k + 1):
                if a[j] and b[k - j]:
                    s += a[j] * b[k - j]
            out.append(s)
        return TruncatedSeries(tuple(out), self.mode)

    __rmul__ = __mul__

    def scale(self, c) -> "TruncatedSeries":
        c = _coerce(c, self.mode)
        return TruncatedSeries(tuple(c * x for x in self.coeffs), self.mode)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs[: order + 1], self.mode)

    def to_float(self) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, FLOAT)

    def __repr__(self):
        return f"TruncatedSeries({list(self.coeffs)!r}, mode={self.mode!r})"


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the smaller of the two orders."""
    return a * b


def exp_series(c, order: int = DEFAULT_ORDER, mode: str = RATIONAL) -> TruncatedSeries:
    """Coefficients ``c**n / n!`` of ``exp(c Z)``."""
    if c < 0:
        raise ValueError("exp_series expects a non-negative rate")
    c = _coerce(c, mode)
    out = [_coerce(1, mode)]
    for n in range(1, order + 1):
        out.append(out[-1] * c / n)
    return TruncatedSeries(tuple(out), mode)


def geometric_inverse(m, order: int = DEFAULT_ORDER, mode: str = RATIONAL) -> TruncatedSeries:
    """Coefficients ``m**n`` of ``1 / (1 - m Z)``."""
    if m < 0:
        raise ValueError("geometric_inverse expects a non-negative mass")
    m = _coerce(m, mode)
    out = [_coerce(1, mode)]
    for _ in range(order):
        out.append(out[-1] * m)
    return TruncatedSeries(tuple(out), mode)


def linear(m, order: int = DEFAULT_ORDER, mode: str = RATIONAL) -> TruncatedSeries:
    """The polynomial ``1 + m Z``."""
    coeffs = [1, m][: order + 1] + [0] * max(0, order - 1)
    return TruncatedSeries(tuple(coeffs), mode)


def product_all(factors: Sequence[TruncatedSeries], order: int | None = None,
                mode: str | None = None) -> TruncatedSeries:
    """Left fold of :func:`mul`; the empty product is the series 1.

    ``order`` and ``mode`` are only consulted for the empty product.
    """
    factors = list(factors)
    if not factors:
        return TruncatedSeries.one(DEFAULT_ORDER if order is None else order, mode or RATIONAL)
    return reduce(mul, factors)


def strict_tail_bound(mass: float, order: int, z: float) -> float:
    """Bound on the omitted tail ``sum_{n>N} L_n |z|^n`` of a strict run function.

    Uses ``L_n <= mass**n / n!``.
    """
    x = float(mass) * abs(z)
    if x == 0:
        return 0.0
    log_term = (order + 1) * math.log(x) - math.lgamma(order + 2) + x
    return math.exp(log_term) if log_term < 700 else math.inf


def nonstrict_tail_bound(l1: float, l2: float, order: int, z: float) -> float:
    """Bound on the omitted tail of a non-strict run function.

    Uses ``L_{2k} <= L_2**k`` and ``L_{2k+1} <= L_2**k * L_1``; finite only
    when ``L_2 |z|**2 < 1``.
    """
    r = float(l2) * z * z
    if r >= 1:
        return math.inf
    even_from = order // 2 + 1
    odd_from = (order + 1) // 2
    return (r**even_from + float(l1) * abs(z) * r**odd_from) / (1 - r)


def eval_horner(s: TruncatedSeries, z, tail: Callable[[int, float], float] | None = None):
    """Evaluate the truncated polynomial at ``z``.

    Returns ``(value, tail_bound)``.  ``tail`` maps ``(order, z)`` to a bound
    on the omitted coefficients' contribution; without one the bound is
    reported as ``inf``.
    """
    if s.mode == RATIONAL and isinstance(z, float):
        coeffs = [float(c) for c in s.coeffs]
    else:
        coeffs = s.coeffs
    acc = coeffs[-1] * 0
    for c in reversed(coeffs):
        acc = acc * z + c
    bound = math.inf if tail is None else tail(s.order, z)
    return acc, bound
