"""Monte Carlo sampling of i.i.d. sequences and empirical run statistics.

Random numbers come from numpy's ``PCG64`` bit generator seeded with the
caller's integer seed; replica ``r`` of a multi-replica run uses
``seed + r``.  Only consecutive pairs are ever compared, so comparisons are
vectorised through a precomputed leaf-by-leaf relation table.
"""
from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import InvalidMeasure
from .measure import MeasureExpr, Parallel, TotalLeaf, iter_leaves, node_at
from .runfunc import STRICT, RunKind
from .stats import probability_measure

#: longest lookahead used to close the run straddling the end of the window
MAX_LOOKAHEAD = 10**6
_CHUNK = 1 << 16


class Relation(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1
    INCOMPARABLE = 2


@dataclass(frozen=True)
class AtomIndex:
    index: int


@dataclass(frozen=True)
class DiffusePoint:
    value: float


@dataclass(frozen=True)
class Element:
    path: tuple
    value: Union[AtomIndex, DiffusePoint]


def _leaf_checked(expr, path):
    try:
        leaf = node_at(expr, path)
    except (IndexError, TypeError):
        raise InvalidMeasure(f"path {path} does not address a node") from None
    if not isinstance(leaf, TotalLeaf):
        raise InvalidMeasure(f"path {path} does not end at a leaf")
    return leaf


def _position(leaf, value):
    if isinstance(value, AtomIndex):
        if not 0 <= value.index < len(leaf.atoms):
            raise InvalidMeasure(f"atom index {value.index} out of range")
        return leaf.atoms[value.index].pos
    return value.value


def compare(a: Element, b: Element, expr: MeasureExpr) -> Relation:
    """Order relation between two sampled elements.

    The lowest common ancestor decides: a series node orders by child
    index, a parallel node makes the pair incomparable, and inside one leaf
    positions are compared numerically.
    """
    la, lb = _leaf_checked(expr, a.path), _leaf_checked(expr, b.path)
    depth = 0
    while depth < min(len(a.path), len(b.path)) and a.path[depth] == b.path[depth]:
        depth += 1
    if a.path != b.path:
        lca = node_at(expr, a.path[:depth])
        if isinstance(lca, Parallel):
            return Relation.INCOMPARABLE
        return Relation.LESS if a.path[depth] < b.path[depth] else Relation.GREATER
    if a.value == b.value:
        return Relation.EQUAL
    xa, xb = _position(la, a.value), _position(lb, b.value)
    if xa == xb:
        return Relation.EQUAL
    return Relation.LESS if xa < xb else Relation.GREATER


def _continues(rel: Relation, kind: RunKind) -> bool:
    if kind is STRICT:
        return rel is Relation.LESS
    return rel in (Relation.LESS, Relation.EQUAL)


def detect_runs(seq: Sequence[Element], kind, expr: MeasureExpr) -> list[int]:
    """Lengths of the consecutive ascending runs partitioning ``seq``.

    The last entry is the (possibly censored) run still open at the end.
    """
    kind = RunKind.parse(kind)
    if not seq:
        raise ValueError("detect_runs needs a non-empty sequence")
    lengths = [1]
    for prev, cur in zip(seq, seq[1:]):
        if _continues(compare(prev, cur, expr), kind):
            lengths[-1] += 1
        else:
            lengths.append(1)
    return lengths


# -- vectorised sampler --------------------------------------------------------


class _Sampler:
    """Flattened view of a probability measure for bulk sampling."""

    def __init__(self, expr: MeasureExpr):
        self.expr = expr
        self.paths = []
        leaf_of, atom_of, pos_of, mass_of = [], [], [], []
        for li, (path, leaf) in enumerate(iter_leaves(expr)):
            self.paths.append(path)
            for k, a in enumerate(leaf.atoms):
                leaf_of.append(li)
                atom_of.append(k)
                pos_of.append(float(a.pos))
                mass_of.append(float(a.mass))
            leaf_of.append(li)
            atom_of.append(-1)
            pos_of.append(np.nan)
            mass_of.append(float(leaf.diffuse))
        p = np.asarray(mass_of)
        self.cdf = np.cumsum(p / p.sum())
        self.cdf[-1] = 1.0
        self.leaf_of = np.asarray(leaf_of, dtype=np.int64)
        self.atom_of = np.asarray(atom_of, dtype=np.int64)
        self.pos_of = np.asarray(pos_of)
        n = len(self.paths)
        rel = np.full((n, n), int(Relation.EQUAL), dtype=np.int8)
        for i, pa in enumerate(self.paths):
            for j, pb in enumerate(self.paths):
                if i != j:
                    rel[i, j] = int(_path_relation(expr, pa, pb))
        self.rel = rel

    def draw(self, rng: np.random.Generator, size: int):
        u = rng.random(size)
        comp = np.searchsorted(self.cdf, u, side="right")
        np.minimum(comp, len(self.cdf) - 1, out=comp)
        x = rng.random(size)
        atom = self.atom_of[comp]
        is_atom = atom >= 0
        x[is_atom] = self.pos_of[comp[is_atom]]
        return self.leaf_of[comp], atom, x

    def continues(self, leaf, atom, x, kind: RunKind) -> np.ndarray:
        """``c[i]`` is true when element ``i+1`` extends the run holding ``i``."""
        l0, l1 = leaf[:-1], leaf[1:]
        same = l0 == l1
        rel = self.rel[l0, l1]
        equal = same & (((atom[:-1] == atom[1:]) & (atom[1:] >= 0)) | (x[:-1] == x[1:]))
        less = np.where(same, (x[:-1] < x[1:]) & ~equal, rel == int(Relation.LESS))
        if kind is STRICT:
            return less
        return less | equal

    def element(self, leaf, atom, x) -> Element:
        value = AtomIndex(int(atom)) if atom >= 0 else DiffusePoint(float(x))
        return Element(self.paths[int(leaf)], value)


def _path_relation(expr, pa, pb):
    depth = 0
    while pa[depth] == pb[depth]:
        depth += 1
    if isinstance(node_at(expr, pa[:depth]), Parallel):
        return Relation.INCOMPARABLE
    return Relation.LESS if pa[depth] < pb[depth] else Relation.GREATER


def sample(expr: MeasureExpr, rng, size: int | None = None):
    """Draw one element (or a list of ``size`` elements) from a probability measure.

    ``rng`` is a ``numpy.random.Generator`` or an integer seed.
    """
    mu = probability_measure(expr)
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    s = _Sampler(mu)
    leaf, atom, x = s.draw(rng, 1 if size is None else size)
    out = [s.element(*t) for t in zip(leaf, atom, x)]
    return out[0] if size is None else out


@dataclass
class RunHistogram:
    """Counts of runs starting before index ``b`` along one or more sample paths.

    ``counts_by_length`` includes the run starting at index 0;
    ``initial_counts`` records that run's length separately so interior
    statistics can exclude it.  ``scanned`` is the number of indices
    covered by the counted runs.  ``includes_final_open_run`` is set when
    the last run could not be closed within the lookahead cap, in which
    case its counted length is only a lower bound.
    """

    kind: RunKind
    b: int
    runs_started: int
    counts_by_length: Counter = field(default_factory=Counter)
    initial_counts: Counter = field(default_factory=Counter)
    scanned: int = 0
    includes_final_open_run: bool = False

    def ratio(self, n: int) -> float:
        return self.counts_by_length.get(n, 0) / self.runs_started

    def interior_counts(self) -> Counter:
        c = Counter(self.counts_by_length)
        c.subtract(self.initial_counts)
        return +c

    def merge(self, other: "RunHistogram") -> "RunHistogram":
        if other.kind is not self.kind:
            raise ValueError("cannot merge histograms of different run kinds")
        return RunHistogram(
            self.kind,
            self.b + other.b,
            self.runs_started + other.runs_started,
            self.counts_by_length + other.counts_by_length,
            self.initial_counts + other.initial_counts,
            self.scanned + other.scanned,
            self.includes_final_open_run or other.includes_final_open_run,
        )


@dataclass(frozen=True)
class EmpiricalSummary:
    runs: int
    pmf: dict
    mean: float
    variance: float
    mean_se: float

    def pmf_se(self, n: int) -> float:
        p = self.pmf.get(n, 0.0)
        return math.sqrt(p * (1 - p) / self.runs) if self.runs else math.inf


def summarize(counts: Counter) -> EmpiricalSummary:
    total = sum(counts.values())
    if total == 0:
        return EmpiricalSummary(0, {}, math.nan, math.nan, math.inf)
    lengths = np.fromiter(counts.keys(), dtype=float)
    weights = np.fromiter(counts.values(), dtype=float)
    m = float(np.dot(lengths, weights) / total)
    var = float(np.dot((lengths - m) ** 2, weights) / total)
    pmf = {int(k): v / total for k, v in sorted(counts.items())}
    return EmpiricalSummary(total, pmf, m, var, math.sqrt(var / total))


def _sample_path(sampler, kind, b, rng):
    """Run start indices and lengths for every run starting in ``[0, b)``.

    Draws ``b`` elements, then keeps drawing until the run straddling ``b``
    closes or the lookahead cap is reached.
    """
    leaf, atom, x = sampler.draw(rng, b)
    cont = sampler.continues(leaf, atom, x, kind)
    pieces = [cont]
    last = (leaf[-1:], atom[-1:], x[-1:])
    extra, closed = 0, False
    while extra < MAX_LOOKAHEAD:
        size = min(_CHUNK, MAX_LOOKAHEAD - extra)
        nl, na, nx = sampler.draw(rng, size)
        c = sampler.continues(np.concatenate([last[0], nl]), np.concatenate([last[1], na]),
                              np.concatenate([last[2], nx]), kind)
        pieces.append(c)
        extra += size
        last = (nl[-1:], na[-1:], nx[-1:])
        if not c.all():
            closed = True
            break
    cont = np.concatenate(pieces)
    starts = np.flatnonzero(np.concatenate([[True], ~cont]))
    inside = starts[starts < b]
    if closed:
        end = starts[len(inside)]
    else:
        end = len(cont) + 1
    bounds = np.append(inside, end)
    return inside, np.diff(bounds), not closed


def simulate_histogram(expr: MeasureExpr, kind, b: int, seed: int) -> RunHistogram:
    """Histogram of run lengths for runs starting at indices ``0 .. b-1``.

    Deterministic for a fixed ``seed``.
    """
    kind = RunKind.parse(kind)
    if b < 1:
        raise ValueError("b must be at least 1")
    mu = probability_measure(expr, STRICT)
    sampler = _Sampler(mu)
    rng = np.random.default_rng(seed)
    starts, lengths, open_run = _sample_path(sampler, kind, b, rng)
    counts = Counter(dict(zip(*np.unique(lengths, return_counts=True))))
    counts = Counter({int(k): int(v) for k, v in counts.items()})
    return RunHistogram(kind, b, len(starts), counts, Counter({int(lengths[0]): 1}),
                        int(lengths.sum()), open_run)


def simulate_replicas(expr: MeasureExpr, kind, b: int, seed: int, replicas: int = 1) -> RunHistogram:
    """Merge of independent replicas seeded ``seed, seed + 1, ...``."""
    hists = [simulate_histogram(expr, kind, b, seed + r) for r in range(replicas)]
    out = hists[0]
    for h in hists[1:]:
        out = out.merge(h)
    return out


def slln_trace(expr: MeasureExpr, kind, n: int, checkpoints: Sequence[int], seed: int = 0):
    """``(b, U_{b,n} / W_b)`` along a single sample path.

    ``W_b`` counts runs starting before ``b``; ``U_{b,n}`` those of length ``n``.
    """
    kind = RunKind.parse(kind)
    checkpoints = list(checkpoints)
    if any(b2 <= b1 for b1, b2 in zip(checkpoints, checkpoints[1:])):
        raise ValueError("checkpoints must be strictly increasing")
    mu = probability_measure(expr, STRICT)
    sampler = _Sampler(mu)
    rng = np.random.default_rng(seed)
    starts, lengths, _ = _sample_path(sampler, kind, checkpoints[-1], rng)
    hit = np.cumsum(lengths == n)
    out = []
    for b in checkpoints:
        w = int(np.searchsorted(starts, b, side="left"))
        out.append((b, float(hit[w - 1]) / w if w else math.nan))
    return out


def sample_sequence(expr: MeasureExpr, length: int, seed: int) -> list[Element]:
    """``length`` i.i.d. draws as :class:`Element` objects (small sizes only)."""
    return sample(expr, np.random.default_rng(seed), size=length)


__all__ = [
    "Relation", "AtomIndex", "DiffusePoint", "Element", "compare", "detect_runs",
    "sample", "sample_sequence", "RunHistogram", "EmpiricalSummary", "summarize",
    "simulate_histogram", "simulate_replicas", "slln_trace",
]
