"""Run-length distributions derived from run functions.

For a probability measure with run coefficients ``L_n``:

* the run starting at index 0 has ``P(N_0 = n) = L_n - L_{n+1}``;
* a run starting at an interior index ``i >= 1`` has
  ``P(N_i = n | S_i) = (L_n - 2 L_{n+1} + L_{n+2}) / (1 - L_2)``.

Means and variances follow from ``P(1)``, ``P'(1)`` and ``L_2``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from . import catalog
from .errors import DegenerateMeasure, InvalidMeasure, NotProbability, NotTotalOrder
from .measure import (
    FLOAT, RATIONAL, MeasureExpr, atom_mass_multiset, dropped_mass, is_atomic,
    is_total_order, normalize, numeric_mode, total_mass, validate,
)
from .runfunc import (
    NONSTRICT, STRICT, RunKind, eval_run_function, eval_run_function_with_derivative,
    run_coefficients,
)
from .series import DEFAULT_ORDER


class Position(enum.Enum):
    INITIAL = "initial"
    INTERIOR = "interior"

    @classmethod
    def parse(cls, value) -> "Position":
        if isinstance(value, cls):
            return value
        for p in cls:
            if p.value == str(value).lower():
                return p
        raise ValueError(f"unknown position {value!r}")


INITIAL = Position.INITIAL
INTERIOR = Position.INTERIOR


@dataclass(frozen=True)
class RunStatistics:
    kind: RunKind
    position: Position
    pgf_coeffs: tuple
    mean: object
    variance: object
    mass_deficit: object
    mode: str

    def pmf(self, n: int):
        return self.pgf_coeffs[n] if n < len(self.pgf_coeffs) else 0


def probability_measure(expr: MeasureExpr, kind=STRICT) -> MeasureExpr:
    """Check ``expr`` is usable for run statistics and return the measure to use.

    Measures whose mass falls short of 1 only by a certified dropped tail
    (or by float rounding) are renormalised.
    """
    kind = RunKind.parse(kind)
    report = validate(expr)
    if not report.is_valid:
        raise InvalidMeasure("; ".join(report.issues))
    if not report.is_probability:
        raise NotProbability(f"total mass is {report.total_mass}, not 1")
    if kind is NONSTRICT and report.is_degenerate:
        raise DegenerateMeasure("a single atom carries all the mass: every non-strict run is infinite")
    if dropped_mass(expr) or (numeric_mode(expr) == FLOAT and total_mass(expr) != 1):
        expr = normalize(expr)
    return expr


def _coefficients(expr, kind, order):
    return run_coefficients(expr, kind, order).series.coeffs


def pgf(expr: MeasureExpr, kind=STRICT, position=INITIAL, order: int = DEFAULT_ORDER):
    """PGF coefficients of the run length and the probability not covered.

    Returns ``(coeffs, mass_deficit)`` where ``coeffs[n] = P(N = n)``.  The
    initial position yields ``order`` coefficients, the interior one
    ``order - 1``.
    """
    kind, position = RunKind.parse(kind), Position.parse(position)
    mu = probability_measure(expr, kind)
    L = _coefficients(mu, kind, order)
    if position is INITIAL:
        coeffs = tuple(L[n] - L[n + 1] for n in range(order))
    else:
        denom = 1 - L[2]
        coeffs = (L[0] * 0,) + tuple(
            (L[n] - 2 * L[n + 1] + L[n + 2]) / denom for n in range(1, order - 1)
        )
    deficit = 1 - sum(coeffs)
    return coeffs, deficit


def _exact_ok(mu):
    return numeric_mode(mu) == RATIONAL and is_atomic(mu)


def _at_one(mu, kind):
    z = Fraction(1) if _exact_ok(mu) else 1.0
    return eval_run_function_with_derivative(mu, kind, z)


def mean(expr: MeasureExpr, kind=STRICT, position=INITIAL):
    """Expected run length; exact for rational atom-only measures."""
    kind, position = RunKind.parse(kind), Position.parse(position)
    mu = probability_measure(expr, kind)
    if position is INITIAL:
        p1, _ = _at_one(mu, kind)
        return p1 - 1
    l2 = _coefficients(mu, kind, 2)[2]
    return 1 / (1 - l2)


def variance(expr: MeasureExpr, kind=STRICT, position=INITIAL):
    kind, position = RunKind.parse(kind), Position.parse(position)
    mu = probability_measure(expr, kind)
    p1, dp1 = _at_one(mu, kind)
    if position is INITIAL:
        return p1 - p1 * p1 + 2 * dp1
    l2 = _coefficients(mu, kind, 2)[2]
    if not _exact_ok(mu):
        l2 = float(l2)
    d = 2 - 2 * l2
    return (4 * p1 - 6) / d - 4 / (d * d)


def run_statistics(expr: MeasureExpr, kind=STRICT, position=INITIAL,
                   order: int = DEFAULT_ORDER) -> RunStatistics:
    kind, position = RunKind.parse(kind), Position.parse(position)
    coeffs, deficit = pgf(expr, kind, position, order)
    mu = probability_measure(expr, kind)
    mode = RATIONAL if _exact_ok(mu) else FLOAT
    return RunStatistics(kind, position, coeffs, mean(expr, kind, position),
                         variance(expr, kind, position), deficit, mode)


def total_order_stats(expr: MeasureExpr, kind=STRICT, order: int = DEFAULT_ORDER):
    """``(initial, interior)`` statistics of a total order from atom-sum formulas.

    Independent of the tree recursion: uses only the atom masses and the
    diffuse mass.
    """
    kind = RunKind.parse(kind)
    if not is_total_order(expr):
        raise NotTotalOrder("total_order_stats needs a total order")
    mu = probability_measure(expr, kind)
    masses, md = atom_mass_multiset(mu)
    exact = _exact_ok(mu)
    base = Fraction(1) if exact else math.exp(float(md))
    sq = sum((m * m for m in masses), Fraction(0) if exact else 0.0)
    if kind is STRICT:
        for m in masses:
            base *= 1 + m
        corr = -2 * sum((m * m / (1 + m) for m in masses), 0 * sq)
        denom = 1 + sq
    else:
        for m in masses:
            base /= 1 - m
        corr = 2 * sum((m * m / (1 - m) for m in masses), 0 * sq)
        denom = 1 - sq
    if not exact:
        base, corr, denom = float(base), float(corr), float(denom)
    init_mean = base - 1
    init_var = base * (3 - base + corr)
    int_mean = 2 / denom
    int_var = 2 / denom * (-3 + 2 * base - 2 / denom)
    mode = RATIONAL if exact else FLOAT
    c0, d0 = pgf(mu, kind, INITIAL, order)
    c1, d1 = pgf(mu, kind, INTERIOR, order)
    return (
        RunStatistics(kind, INITIAL, c0, init_mean, init_var, d0, mode),
        RunStatistics(kind, INTERIOR, c1, int_mean, int_var, d1, mode),
    )


def even_die_stats(n: int) -> dict:
    """Means of all four run lengths for the parity-constrained ``2n``-sided die."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    mu = catalog.even_die(n)
    return {
        (kind, pos): mean(mu, kind, pos)
        for kind in (STRICT, NONSTRICT) for pos in (INITIAL, INTERIOR)
    }


def pgf_value(expr: MeasureExpr, kind, position, z):
    """Closed-form PGF ``G(z)`` at a real ``z != 0``.

    A ``Fraction`` argument on a rational atom-only measure is evaluated
    exactly, which keeps finite differences free of rounding.
    """
    kind, position = RunKind.parse(kind), Position.parse(position)
    mu = probability_measure(expr, kind)
    if not (isinstance(z, Fraction) and _exact_ok(mu)):
        z = float(z)
    g0 = (1 + (z - 1) * eval_run_function(mu, kind, z)) / z
    if position is INITIAL:
        return g0
    l2 = _coefficients(mu, kind, 2)[2]
    if isinstance(z, float):
        l2 = float(l2)
    return 1 + (z - 1) / (z * (1 - l2)) * g0
