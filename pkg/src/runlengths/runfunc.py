"""Strict and non-strict run functions of a measure.

The run function ``P(Z) = sum L_n Z^n`` has ``L_n`` equal to the mass of
ascending ``n``-tuples.  On a total order it factors over atoms and the
diffuse part; series composition multiplies run functions and parallel
composition adds ``P - 1``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from . import series as ps
from .errors import ModeError, PoleError
from .measure import (
    FLOAT, MeasureExpr, Series, atom_mass_multiset, dropped_mass, is_total_order,
    max_atom_mass, numeric_mode, total_mass,
)
from .series import DEFAULT_ORDER, TruncatedSeries

POLE_TOL = 1e-12


class RunKind(enum.Enum):
    STRICT = "strict"
    NONSTRICT = "nonstrict"

    @classmethod
    def parse(cls, value) -> "RunKind":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "").replace("_", "")
        for k in cls:
            if k.value == key:
                return k
        raise ValueError(f"unknown run kind {value!r}")


STRICT = RunKind.STRICT
NONSTRICT = RunKind.NONSTRICT


@dataclass(frozen=True)
class RunFunctionResult:
    series: TruncatedSeries
    kind: RunKind
    trunc_error_at_one: float

    @property
    def coeffs(self):
        return self.series.coeffs


def _total_order_series(atom_masses, md, kind, order, mode):
    factors = [ps.exp_series(md, order, mode)]
    if kind is STRICT:
        factors += [ps.linear(m, order, mode) for m in atom_masses if m]
    else:
        factors += [ps.geometric_inverse(m, order, mode) for m in atom_masses if m]
    return ps.product_all(factors)


def _series_of(expr, kind, order, mode):
    if is_total_order(expr):
        masses, md = atom_mass_multiset(expr)
        return _total_order_series(masses, md, kind, order, mode)
    if isinstance(expr, Series):
        return ps.product_all([_series_of(c, kind, order, mode) for c in expr.children])
    # parallel: P - 1 is additive over children
    one = TruncatedSeries.one(order, mode)
    acc = one
    for c in expr.children:
        acc = acc + (_series_of(c, kind, order, mode) - one)
    return acc


def run_coefficients(expr: MeasureExpr, kind=STRICT, order: int = DEFAULT_ORDER) -> RunFunctionResult:
    """Coefficients ``L_0 .. L_order`` of the run function of ``expr``.

    Exact when the measure is in rational mode.  ``trunc_error_at_one``
    bounds the distance at ``z = 1`` to the run function of the full
    (untruncated) measure: series tail plus the effect of any dropped atom
    mass.
    """
    kind = RunKind.parse(kind)
    mode = numeric_mode(expr)
    s = _series_of(expr, kind, order, mode)
    return RunFunctionResult(s, kind, _error_at_one(expr, kind, order, s))


def _error_at_one(expr, kind, order, s):
    mass = float(total_mass(expr))
    gap = float(dropped_mass(expr))
    full = mass + gap
    if kind is STRICT:
        tail = ps.strict_tail_bound(mass, order, 1.0)
        p_bound = math.exp(full)
    else:
        l2 = float(s[2]) if order >= 2 else mass * mass
        tail = ps.nonstrict_tail_bound(mass, l2, order, 1.0)
        biggest = max(float(max_atom_mass(expr)), gap)
        l2_full = full * (full + biggest) / 2
        p_bound = (1 + full) / (1 - l2_full) if l2_full < 1 else math.inf
    if gap == 0:
        return tail
    return tail + truncation_error_bound(gap, 1.0, p_bound)


def truncation_error_bound(full_mass_gap, z, p_bound) -> float:
    """``|P_1(z) - P_2(z)| <= ||mu_1 - mu_2|| |z| P_1(|z|) P_2(|z|)``.

    ``p_bound`` must dominate both ``P(|z|)`` values.
    """
    if full_mass_gap == 0:
        return 0.0
    return float(full_mass_gap) * abs(float(z)) * float(p_bound) ** 2


def second_coefficient(expr: MeasureExpr, kind=STRICT):
    """``L_2``, i.e. half of ``P''(0)``."""
    return run_coefficients(expr, kind, order=2).series[2]


def total_order_second_coefficient(expr: MeasureExpr, kind=STRICT):
    """``(||mu||**2 -/+ sum m_a**2) / 2`` for a total order."""
    kind = RunKind.parse(kind)
    masses, md = atom_mass_multiset(expr)
    norm = sum(masses, md)
    sq = sum((m * m for m in masses), md * 0)
    val = norm * norm - sq if kind is STRICT else norm * norm + sq
    return val / 2


# -- closed-form evaluation -----------------------------------------------------


def _leaf_eval(atom_masses, md, kind, z, exact):
    if md:
        if exact:
            raise ModeError("exp of a rational is irrational; evaluate with a float argument")
        v = math.exp(md * z)
        d = md * v
    else:
        v, d = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    for m in atom_masses:
        if not m:
            continue
        if kind is STRICT:
            f, fp = 1 + m * z, m
        else:
            g = 1 - m * z
            if g == 0 or abs(g) < POLE_TOL:
                raise PoleError(f"non-strict factor 1/(1 - {m} z) has a pole at z={z}")
            f, fp = 1 / g, m / (g * g)
        v, d = v * f, d * f + v * fp
    return v, d


def _eval(expr, kind, z, exact):
    if is_total_order(expr):
        masses, md = atom_mass_multiset(expr)
        return _leaf_eval(masses, md, kind, z, exact)
    parts = [_eval(c, kind, z, exact) for c in expr.children]
    if isinstance(expr, Series):
        v, d = parts[0]
        for cv, cd in parts[1:]:
            v, d = v * cv, d * cv + v * cd
        return v, d
    v = 1 + sum(cv - 1 for cv, _ in parts)
    d = sum(cd for _, cd in parts)
    return v, d


def _prepare(expr, kind, z):
    kind = RunKind.parse(kind)
    exact = isinstance(z, Fraction) and numeric_mode(expr) != FLOAT
    if not exact:
        z = float(z)
    return kind, z, exact


def eval_run_function(expr: MeasureExpr, kind, z):
    """Closed-form value of the run function at a real ``z``.

    A ``Fraction`` argument on an exact, atom-only measure gives an exact
    result; otherwise evaluation is in floating point.
    """
    kind, z, exact = _prepare(expr, kind, z)
    return _eval(expr, kind, z, exact)[0]


def eval_run_function_with_derivative(expr: MeasureExpr, kind, z):
    """``(P(z), P'(z))`` by forward-mode propagation through the tree."""
    kind, z, exact = _prepare(expr, kind, z)
    return _eval(expr, kind, z, exact)
