"""Brute-force ground truth for small atom-only measures.

Everything here enumerates tuples of atoms directly from the event
definitions and multiplies exact masses; nothing goes through run
functions or generating-function identities.  Prefixes that already
violate the event are abandoned, which only skips zero-probability
tuples.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, DegenerateMeasure, DiffuseUnsupported, NotTotalOrder
from .measure import MeasureExpr, is_atomic, is_total_order, iter_leaves
from .runfunc import STRICT, RunKind
from .simulate import AtomIndex, Element, Relation, compare
from .stats import INITIAL, Position

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class AtomTable:
    """Every atom of a finite measure with the full pairwise order matrix."""

    ids: tuple
    masses: tuple
    paths: tuple
    positions: tuple
    order: tuple  # order[i][j] is the Relation of atom i to atom j

    @classmethod
    def from_measure(cls, expr: MeasureExpr) -> "AtomTable":
        if not is_atomic(expr):
            raise DiffuseUnsupported("the oracle only handles measures without diffuse mass")
        elems, masses, paths, positions = [], [], [], []
        for path, leaf in iter_leaves(expr):
            for k, a in enumerate(leaf.atoms):
                elems.append(Element(path, AtomIndex(k)))
                masses.append(Fraction(a.mass))
                paths.append(path)
                positions.append(a.pos)
        order = tuple(tuple(compare(a, b, expr) for b in elems) for a in elems)
        return cls(tuple(range(len(elems))), tuple(masses), tuple(paths), tuple(positions), order)

    def __len__(self):
        return len(self.ids)

    def less(self, i, j) -> bool:
        return self.order[i][j] is Relation.LESS

    def leq(self, i, j) -> bool:
        return self.order[i][j] in (Relation.LESS, Relation.EQUAL)

    def total_mass(self) -> Fraction:
        return sum(self.masses, Fraction(0))


def _step(table, kind):
    return table.less if kind is STRICT else table.leq


def _check_budget(table, length, budget):
    if len(table) ** length > budget:
        raise BudgetExceeded(f"{len(table)}^{length} tuples exceeds the budget of {budget}")


def _enumerate(table, constraints, length):
    """Sum of mass products over ``length``-tuples meeting pairwise constraints.

    ``constraints[k]`` (for ``k >= 1``) tests ``(t[k-1], t[k])``.
    """
    m = table.masses
    n = len(table)
    total = Fraction(0)
    stack = [((i,), m[i]) for i in range(n)]
    while stack:
        prefix, w = stack.pop()
        k = len(prefix)
        if k == length:
            total += w
            continue
        test = constraints[k]
        last = prefix[-1]
        for j in range(n):
            if test(last, j):
                stack.append((prefix + (j,), w * m[j]))
    return total


def oracle_run_coefficient(expr: MeasureExpr, kind, n: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Mass of ordered ``n``-tuples of atoms forming an ascending chain."""
    kind = RunKind.parse(kind)
    table = AtomTable.from_measure(expr)
    if n == 0:
        return Fraction(1)
    _check_budget(table, n, budget)
    up = _step(table, kind)
    return _enumerate(table, [None] + [up] * (n - 1), n)


def oracle_run_length_pmf(expr: MeasureExpr, kind, position, n: int,
                          budget: int = DEFAULT_BUDGET) -> Fraction:
    """``P(N_0 = n)`` or ``P(N_i = n | S_i)`` straight from the event definitions.

    Initial: ``X_0 < ... < X_{n-1}`` then ``X_{n-1}`` not below ``X_n``.
    Interior: additionally ``X_{i-1}`` not below ``X_i`` in front, and the
    result is divided by ``P(S_i)``.
    """
    kind, position = RunKind.parse(kind), Position.parse(position)
    table = AtomTable.from_measure(expr)
    if n <= 0:
        return Fraction(0)
    up = _step(table, kind)

    def breaks(i, j):
        return not up(i, j)

    if position is INITIAL:
        length = n + 1
        _check_budget(table, length, budget)
        return _enumerate(table, [None] + [up] * (n - 1) + [breaks], length)
    length = n + 2
    _check_budget(table, length, budget)
    start = 1 - oracle_run_coefficient(expr, kind, 2, budget)
    if start == 0:
        raise DegenerateMeasure("no run ever starts after index 0")
    joint = _enumerate(table, [None, breaks] + [up] * (n - 1) + [breaks], length)
    return joint / start


def oracle_record_probability(expr: MeasureExpr, n: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    """``P(X_n >= max(X_0, ..., X_{n-1}))`` on an atom-only total order."""
    if not is_total_order(expr):
        raise NotTotalOrder("record events are only defined here for total orders")
    table = AtomTable.from_measure(expr)
    _check_budget(table, n + 1, budget)
    m = table.masses
    total = Fraction(0)
    for t in itertools.product(range(len(table)), repeat=n + 1):
        top = t[-1]
        if all(table.leq(i, top) for i in t[:-1]):
            w = Fraction(1)
            for i in t:
                w *= m[i]
            total += w
    return total
