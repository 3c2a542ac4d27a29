"""Finite measures on countably series-parallel orders.

A measure is an immutable expression tree.  Leaves are totally ordered
pieces carrying point masses (atoms) at positions in [0, 1] plus a
uniform diffuse part on [0, 1]; interior nodes stack their children
(``Series``, listed bottom to top) or set them side by side with every
cross pair incomparable (``Parallel``).

Masses are either exact (``int``/``Fraction``) or ``float``.  The two are
never mixed inside one tree; :func:`numeric_mode` reports which one a tree
uses.
"""
from __future__ import annotations

import json
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import InvalidMeasure, ModeError, NotTotalOrder, SpecSyntaxError

Number = Union[int, Fraction, float]

RATIONAL = "rational"
FLOAT = "float"

#: float-mode slack when deciding whether a measure has unit mass
FLOAT_MASS_TOL = 1e-12


@dataclass(frozen=True)
class Atom:
    pos: float
    mass: Number


@dataclass(frozen=True)
class TotalLeaf:
    """A total order piece: atoms plus uniform diffuse mass on [0, 1].

    ``dropped`` is a certified upper bound on mass removed when a countable
    atom family was truncated (0 for genuinely finite leaves).
    """

    atoms: tuple[Atom, ...] = ()
    diffuse: Number = 0
    dropped: Number = 0

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))

    @property
    def mass(self) -> Number:
        return sum((a.mass for a in self.atoms), self.diffuse * 0) + self.diffuse


@dataclass(frozen=True)
class Series:
    children: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Parallel:
    children: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


MeasureExpr = Union[TotalLeaf, Series, Parallel]


@dataclass(frozen=True)
class ValidationReport:
    is_valid: bool
    total_mass: Number
    is_probability: bool
    is_degenerate: bool | None
    issues: tuple[str, ...] = ()


# -- traversal ---------------------------------------------------------------


def iter_leaves(expr: MeasureExpr, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], TotalLeaf]]:
    """Yield ``(path, leaf)`` pairs in left-to-right (bottom-to-top) order."""
    if isinstance(expr, TotalLeaf):
        yield path, expr
        return
    for i, child in enumerate(expr.children):
        yield from iter_leaves(child, path + (i,))


def node_at(expr: MeasureExpr, path: Sequence[int]) -> MeasureExpr:
    node = expr
    for i in path:
        if isinstance(node, TotalLeaf):
            raise IndexError(f"path {tuple(path)} descends below a leaf")
        node = node.children[i]
    return node


def _masses(expr):
    for _, leaf in iter_leaves(expr):
        yield leaf.diffuse
        yield leaf.dropped
        for a in leaf.atoms:
            yield a.mass


def numeric_mode(expr: MeasureExpr) -> str:
    """Return ``"rational"`` when every mass is exact, else ``"float"``."""
    if any(isinstance(m, float) for m in _masses(expr)):
        return FLOAT
    return RATIONAL


def map_masses(expr: MeasureExpr, fn) -> MeasureExpr:
    if isinstance(expr, TotalLeaf):
        return TotalLeaf(
            tuple(Atom(a.pos, fn(a.mass)) for a in expr.atoms),
            fn(expr.diffuse),
            fn(expr.dropped),
        )
    return type(expr)(tuple(map_masses(c, fn) for c in expr.children))


def to_float(expr: MeasureExpr) -> MeasureExpr:
    return map_masses(expr, float)


def to_rational(expr: MeasureExpr) -> MeasureExpr:
    """Convert float masses to the exact binary fractions they represent."""
    return map_masses(expr, lambda m: Fraction(m))


# -- mass bookkeeping ----------------------------------------------------------


def total_mass(expr: MeasureExpr) -> Number:
    """Sum of all atom and diffuse masses (exact in rational mode)."""
    return sum((leaf.mass for _, leaf in iter_leaves(expr)), 0)


def dropped_mass(expr: MeasureExpr) -> Number:
    return sum((leaf.dropped for _, leaf in iter_leaves(expr)), 0)


def diffuse_mass(expr: MeasureExpr) -> Number:
    return sum((leaf.diffuse for _, leaf in iter_leaves(expr)), 0)


def atom_count(expr: MeasureExpr) -> int:
    return sum(len(leaf.atoms) for _, leaf in iter_leaves(expr))


def max_atom_mass(expr: MeasureExpr) -> Number:
    return max((a.mass for _, leaf in iter_leaves(expr) for a in leaf.atoms), default=0)


def is_atomic(expr: MeasureExpr) -> bool:
    return all(leaf.diffuse == 0 for _, leaf in iter_leaves(expr))


def has_unit_mass(expr: MeasureExpr) -> bool:
    """True when the mass, together with any certified dropped tail, is 1."""
    m = total_mass(expr) + dropped_mass(expr)
    if numeric_mode(expr) == RATIONAL:
        return m == 1
    return abs(m - 1) <= FLOAT_MASS_TOL


def normalize(expr: MeasureExpr) -> MeasureExpr:
    """Rescale to a probability measure and forget any dropped tail."""
    m = total_mass(expr)
    if m == 0:
        raise InvalidMeasure("cannot normalize a zero measure")
    out = map_masses(expr, lambda x: x / m)
    return _clear_dropped(out)


def _clear_dropped(expr):
    if isinstance(expr, TotalLeaf):
        return replace(expr, dropped=expr.dropped * 0)
    return type(expr)(tuple(_clear_dropped(c) for c in expr.children))


def validate(expr: MeasureExpr) -> ValidationReport:
    issues = []

    def visit(node, path):
        if isinstance(node, TotalLeaf):
            for name, m in (("diffuse", node.diffuse), ("dropped", node.dropped)):
                if not _is_finite_number(m) or m < 0:
                    issues.append(f"leaf {path}: {name} mass {m!r} is not a finite non-negative number")
            seen = set()
            for k, a in enumerate(node.atoms):
                if not _is_finite_number(a.mass) or a.mass < 0:
                    issues.append(f"leaf {path}: atom {k} mass {a.mass!r} is not a finite non-negative number")
                if not (0 <= a.pos <= 1):
                    issues.append(f"leaf {path}: atom {k} position {a.pos!r} outside [0, 1]")
                if a.pos in seen:
                    issues.append(f"leaf {path}: duplicate atom position {a.pos!r}")
                seen.add(a.pos)
        elif isinstance(node, (Series, Parallel)):
            if not node.children:
                issues.append(f"{type(node).__name__.lower()} node {path} has no children")
            for i, c in enumerate(node.children):
                visit(c, path + (i,))
        else:
            issues.append(f"node {path}: unknown node type {type(node).__name__}")

    visit(expr, ())
    try:
        numeric_mode(expr)
        mixed = {type(m) is float for m in _masses(expr) if m != 0}
        if len(mixed) > 1:
            issues.append("tree mixes float and exact masses")
    except Exception as exc:  # pragma: no cover - defensive
        issues.append(str(exc))

    valid = not issues
    tm = total_mass(expr) if valid else _safe_total(expr)
    is_prob = valid and has_unit_mass(expr)
    degenerate = None
    if valid:
        positive = [a.mass for _, leaf in iter_leaves(expr) for a in leaf.atoms if a.mass > 0]
        degenerate = len(positive) == 1 and diffuse_mass(expr) == 0
    return ValidationReport(valid, tm, is_prob, degenerate, tuple(issues))


def _is_finite_number(x):
    if isinstance(x, bool):
        return False
    if isinstance(x, Rational):
        return True
    return isinstance(x, float) and math.isfinite(x)


def _safe_total(expr):
    try:
        return float(sum(float(m) for m in _masses(expr)))
    except (TypeError, ValueError):
        return float("nan")


# -- total orders ------------------------------------------------------------


def _nonempty(expr) -> bool:
    return any(leaf.mass > 0 or leaf.atoms for _, leaf in iter_leaves(expr))


def total_order_leaves(expr: MeasureExpr) -> list[TotalLeaf]:
    """Leaves of ``expr`` bottom to top, if the tree describes a total order.

    Parallel nodes are tolerated when at most one child carries anything.
    """
    if isinstance(expr, TotalLeaf):
        return [expr]
    if isinstance(expr, Parallel):
        live = [c for c in expr.children if _nonempty(c)]
        if len(live) > 1:
            raise NotTotalOrder("parallel node with more than one non-empty child")
        return total_order_leaves(live[0]) if live else []
    out = []
    for c in expr.children:
        out.extend(total_order_leaves(c))
    return out


def is_total_order(expr: MeasureExpr) -> bool:
    try:
        total_order_leaves(expr)
    except NotTotalOrder:
        return False
    return True


def atom_mass_multiset(expr: MeasureExpr) -> tuple[tuple[Number, ...], Number]:
    """Sorted atom masses and the total diffuse mass of a total order."""
    leaves = total_order_leaves(expr)
    masses = sorted(a.mass for leaf in leaves for a in leaf.atoms)
    md = sum((leaf.diffuse for leaf in leaves), 0)
    return tuple(masses), md


def rearrange_atoms(expr: MeasureExpr, permutation: Sequence[int]) -> MeasureExpr:
    """Reassign atom masses among the fixed atom slots of a total order.

    Atom slots are numbered bottom to top across leaves, in list order
    within each leaf.  Slot ``j`` of the result receives the mass that atom
    ``permutation[j]`` carried.  Diffuse masses stay where they are.
    """
    total_order_leaves(expr)
    slots = [a for _, leaf in iter_leaves(expr) for a in leaf.atoms]
    perm = list(permutation)
    if sorted(perm) != list(range(len(slots))):
        raise InvalidMeasure(f"{perm} is not a bijection on {len(slots)} atom slots")
    new_masses = iter([slots[k].mass for k in perm])

    def rebuild(node):
        if isinstance(node, TotalLeaf):
            return replace(node, atoms=tuple(Atom(a.pos, next(new_masses)) for a in node.atoms))
        return type(node)(tuple(rebuild(c) for c in node.children))

    return rebuild(expr)


def build_geometric_atoms(p, tail_epsilon) -> tuple[TotalLeaf, Number]:
    """Truncate the geometric family ``p (1-p)^k`` once its tail is below ``tail_epsilon``.

    Atom ``k`` sits at position ``k / (k + 1)``.  At least one atom is
    always emitted.  Returns the leaf and the dropped mass ``(1-p)^K``.
    """
    if not (0 < p < 1):
        raise InvalidMeasure(f"geometric parameter p={p!r} must lie in (0, 1)")
    if not tail_epsilon > 0:
        raise InvalidMeasure("tail_epsilon must be positive")
    q = 1 - p
    eps = Fraction(tail_epsilon) if not isinstance(p, float) else tail_epsilon
    k, tail = 1, q
    while tail > eps:
        k += 1
        tail *= q
    atoms = tuple(Atom(j / (j + 1), p * q**j) for j in range(k))
    return TotalLeaf(atoms, p * 0, tail), tail


# -- spec format -------------------------------------------------------------


def parse_measure_spec(text: str, mode: str | None = None) -> MeasureExpr:
    """Parse the JSON measure spec.

    ``mode`` may force ``"rational"`` (every mass must be exact) or
    ``"float"``; by default the tree is rational unless some mass is written
    as a JSON float.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(f"invalid JSON: {exc.msg}", exc.pos) from None
    return from_dict(doc, mode)


def from_dict(doc, mode: str | None = None) -> MeasureExpr:
    if mode not in (None, RATIONAL, FLOAT):
        raise ValueError(f"unknown numeric mode {mode!r}")
    expr = _node_from_dict(doc, ())
    kinds = {type(m) is float for m in _masses(expr)}
    if mode == RATIONAL and True in kinds:
        raise ModeError("rational mode requires exact masses (integers, 'a/b' strings or num/den objects)")
    if mode == FLOAT or (mode is None and True in kinds):
        expr = to_float(expr)
    return expr


def _require(doc, key, where):
    if key not in doc:
        raise SpecSyntaxError(f"{where}: missing required field {key!r}")
    return doc[key]


def _node_from_dict(doc, path):
    where = f"node {list(path)}"
    if not isinstance(doc, dict):
        raise SpecSyntaxError(f"{where}: expected an object, got {type(doc).__name__}")
    kind = _require(doc, "type", where)
    if kind == "total":
        diffuse = _number(doc.get("diffuse", 0), where + ".diffuse")
        dropped = _number(doc.get("dropped", 0), where + ".dropped")
        atoms = []
        for i, a in enumerate(doc.get("atoms", [])):
            aw = f"{where}.atoms[{i}]"
            if not isinstance(a, dict):
                raise SpecSyntaxError(f"{aw}: expected an object")
            pos = float(_number(_require(a, "pos", aw), aw + ".pos"))
            atoms.append(Atom(pos, _number(_require(a, "mass", aw), aw + ".mass")))
        return TotalLeaf(tuple(atoms), diffuse, dropped)
    if kind in ("series", "parallel"):
        children = _require(doc, "children", where)
        if not isinstance(children, list):
            raise SpecSyntaxError(f"{where}: children must be a list")
        nodes = tuple(_node_from_dict(c, path + (i,)) for i, c in enumerate(children))
        return Series(nodes) if kind == "series" else Parallel(nodes)
    if kind == "geometric":
        p = _number(_require(doc, "p", where), where + ".p")
        eps = _number(_require(doc, "tail_epsilon", where), where + ".tail_epsilon")
        try:
            leaf, _ = build_geometric_atoms(p, eps)
        except InvalidMeasure as exc:
            raise SpecSyntaxError(f"{where}: {exc}") from None
        return leaf
    raise SpecSyntaxError(f"{where}: unknown node type {kind!r}")


def _number(v, where):
    if isinstance(v, bool):
        raise SpecSyntaxError(f"{where}: booleans are not numbers")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError:
            raise SpecSyntaxError(f"{where}: cannot read {v!r} as a rational") from None
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        num, den = v["num"], v["den"]
        if not (isinstance(num, int) and isinstance(den, int)) or den <= 0:
            raise SpecSyntaxError(f"{where}: rational needs integer num and positive den")
        if math.gcd(num, den) != 1:
            raise SpecSyntaxError(f"{where}: rational {num}/{den} is not in lowest terms")
        return Fraction(num, den)
    raise SpecSyntaxError(f"{where}: expected a number or rational, got {v!r}")


def number_to_json(x):
    """Exact values become ``{"num", "den"}`` objects; floats stay floats."""
    if isinstance(x, float):
        return x
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def to_dict(expr: MeasureExpr) -> dict:
    if isinstance(expr, TotalLeaf):
        out = {
            "type": "total",
            "diffuse": number_to_json(expr.diffuse),
            "atoms": [{"pos": a.pos, "mass": number_to_json(a.mass)} for a in expr.atoms],
        }
        if expr.dropped:
            out["dropped"] = number_to_json(expr.dropped)
        return out
    kind = "series" if isinstance(expr, Series) else "parallel"
    return {"type": kind, "children": [to_dict(c) for c in expr.children]}


def serialize_measure_spec(expr: MeasureExpr, indent: int | None = None) -> str:
    return json.dumps(to_dict(expr), indent=indent, sort_keys=True)
