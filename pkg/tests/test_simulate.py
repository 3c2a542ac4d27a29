from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chi2_contingency

from runlengths import catalog
from runlengths.errors import InvalidMeasure, NotProbability
from runlengths.measure import Series, map_masses, rearrange_atoms
from runlengths.runfunc import NONSTRICT, STRICT
from runlengths.simulate import (
    AtomIndex, DiffusePoint, Element, Relation, compare, detect_runs, sample,
    sample_sequence, simulate_histogram, simulate_replicas, slln_trace, summarize,
)
from runlengths.stats import INTERIOR, pgf

F = Fraction


def _even_face(k):
    path, idx = catalog.even_die_element(k)
    return Element(path, AtomIndex(idx))


# -- sampling ------------------------------------------------------------------


def test_degenerate_always_same_atom():
    assert set(sample(catalog.singleton(), 3, size=50)) == {Element((), AtomIndex(0))}


def test_dart_atom_fraction():
    n = 10**6
    xs = sample(catalog.dart(F(1, 2)), np.random.default_rng(5), size=n)
    frac = sum(isinstance(e.value, AtomIndex) for e in xs) / n
    assert abs(frac - 0.5) <= 3 * 0.0005


def test_even_die_faces_uniform():
    n = 60000
    c = Counter(sample_sequence(catalog.even_die(3), n, seed=11))
    se = (1 / 6 * 5 / 6 / n) ** 0.5
    assert len(c) == 6
    assert all(abs(v / n - 1 / 6) <= 3 * se for v in c.values())


def test_sample_requires_probability():
    with pytest.raises(NotProbability):
        sample(catalog.die(6).__class__(catalog.die(6).atoms[:3]), 0)


# -- comparisons ------------------------------------------------------------------


def test_compare_examples():
    expr = Series((catalog.die(2), catalog.dart(F(1, 2))))
    a = Element((0,), AtomIndex(1))
    b = Element((1,), DiffusePoint(0.01))
    assert compare(a, b, expr) is Relation.LESS
    assert compare(b, a, expr) is Relation.GREATER
    ev = catalog.even_die(3)
    assert compare(_even_face(1), _even_face(2), ev) is Relation.INCOMPARABLE
    assert compare(_even_face(1), _even_face(3), ev) is Relation.LESS
    assert compare(a, a, expr) is Relation.EQUAL


def test_compare_bad_path():
    with pytest.raises(InvalidMeasure):
        compare(Element((5,), AtomIndex(0)), Element((0,), AtomIndex(0)), catalog.even_die(2))
    with pytest.raises(InvalidMeasure):
        compare(Element((0,), AtomIndex(9)), Element((0,), AtomIndex(0)), catalog.even_die(2))


_ORDERED = map_masses(Series((catalog.nested_tree(), catalog.dart(F(1, 2)), catalog.even_die(2))),
                      lambda m: m / 3)
_POOL = sample_sequence(_ORDERED, 400, seed=2)
_pick = st.sampled_from(_POOL)
_FLIP = {Relation.LESS: Relation.GREATER, Relation.GREATER: Relation.LESS,
         Relation.EQUAL: Relation.EQUAL, Relation.INCOMPARABLE: Relation.INCOMPARABLE}


@settings(max_examples=300, deadline=None)
@given(_pick, _pick)
def test_compare_antisymmetric(a, b):
    assert compare(b, a, _ORDERED) is _FLIP[compare(a, b, _ORDERED)]


@settings(max_examples=300, deadline=None)
@given(_pick, _pick, _pick)
def test_compare_transitive(a, b, c):
    le = (Relation.LESS, Relation.EQUAL)
    if compare(a, b, _ORDERED) in le and compare(b, c, _ORDERED) in le:
        assert compare(a, c, _ORDERED) in le
        if Relation.LESS in (compare(a, b, _ORDERED), compare(b, c, _ORDERED)):
            assert compare(a, c, _ORDERED) is Relation.LESS


# -- run detection ------------------------------------------------------------------


def test_detect_runs_even_die_sequence():
    ev = catalog.even_die(5)
    seq = [_even_face(k) for k in (1, 3, 7, 8, 2, 4, 5, 9)]
    assert detect_runs(seq, STRICT, ev) == [3, 1, 2, 2]


def test_detect_runs_constant():
    mu = catalog.singleton()
    seq = [Element((), AtomIndex(0))] * 7
    assert detect_runs(seq, STRICT, mu) == [1] * 7
    assert detect_runs(seq, NONSTRICT, mu) == [7]
    with pytest.raises(ValueError):
        detect_runs([], STRICT, mu)


@pytest.mark.parametrize("name", ["nested", "even_die3", "dart"])
def test_vectorised_matches_scalar(name):
    expr = {"nested": catalog.nested_tree(), "even_die3": catalog.even_die(3),
            "dart": catalog.dart(F(1, 2))}[name]
    b = 3000
    for kind in (STRICT, NONSTRICT):
        h = simulate_histogram(expr, kind, b, seed=4)
        # the first b draws are shared; lookahead past b uses separate draws
        lengths = detect_runs(sample_sequence(expr, b, seed=4), kind, expr)
        closed = Counter(lengths[:-1])
        rest = h.counts_by_length - closed
        assert sum(rest.values()) == 1 and next(iter(rest)) >= lengths[-1]
        assert h.runs_started == len(lengths)
        assert h.initial_counts == Counter([lengths[0]]) or len(lengths) == 1


# -- histograms ----------------------------------------------------------------------


def test_degenerate_histogram():
    h = simulate_histogram(catalog.singleton(), STRICT, 1000, seed=1)
    assert h.runs_started == 1000 and h.counts_by_length == {1: 1000}
    assert slln_trace(catalog.singleton(), STRICT, 1, [10, 100, 1000]) == [(10, 1.0), (100, 1.0), (1000, 1.0)]


def test_histogram_deterministic():
    a = simulate_histogram(catalog.die(6), NONSTRICT, 20000, seed=9)
    b = simulate_histogram(catalog.die(6), NONSTRICT, 20000, seed=9)
    assert a == b


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5000), st.integers(0, 2**32), st.sampled_from([STRICT, NONSTRICT]))
def test_histogram_partition(b, seed, kind):
    h = simulate_histogram(catalog.nested_tree(), kind, b, seed)
    assert sum(h.counts_by_length.values()) == h.runs_started
    assert sum(k * v for k, v in h.counts_by_length.items()) == h.scanned
    assert h.scanned >= b and not h.includes_final_open_run


def test_open_run_flagged_when_lookahead_exhausted():
    h = simulate_histogram(catalog.singleton(), NONSTRICT, 10, seed=0)
    assert h.includes_final_open_run and h.runs_started == 1


def test_replicas_merge():
    h = simulate_replicas(catalog.die(3), STRICT, 1000, seed=5, replicas=3)
    parts = [simulate_histogram(catalog.die(3), STRICT, 1000, seed=s) for s in (5, 6, 7)]
    assert h.runs_started == sum(p.runs_started for p in parts)
    assert h.b == 3000
    assert h == parts[2].merge(parts[0].merge(parts[1]))


def test_slln_trace_checks_order():
    with pytest.raises(ValueError):
        slln_trace(catalog.die(6), STRICT, 1, [100, 10])


def test_slln_die6_final_ratio():
    trace = slln_trace(catalog.die(6), STRICT, 1, [10**3, 10**4, 10**5, 10**6], seed=42)
    assert abs(trace[-1][1] - 4 / 9) < 0.01
    long = slln_trace(catalog.die(6), STRICT, 7, [10**4, 10**5], seed=42)
    assert all(r == 0 for _, r in long)


@pytest.mark.parametrize("name", ["die3", "even_die2", "nested", "two_atom"])
def test_empirical_interior_pmf_within_4se(name):
    from conftest import CORPUS
    expr = CORPUS[name]
    for kind in (STRICT, NONSTRICT):
        h = simulate_histogram(expr, kind, 200000, seed=17)
        emp = summarize(h.interior_counts())
        coeffs, _ = pgf(expr, kind, INTERIOR, 32)
        for n in range(1, 6):
            se = max(emp.pmf_se(n), 1e-9)
            assert abs(emp.pmf.get(n, 0.0) - float(coeffs[n])) <= 4 * se + 1e-12, (kind, n)


def test_rearranged_histograms_chi_squared():
    xy = catalog.two_atom(F(1, 3))
    yx = rearrange_atoms(xy, [1, 0])
    for kind in (STRICT, NONSTRICT):
        a = simulate_histogram(xy, kind, 200000, seed=101).interior_counts()
        b = simulate_histogram(yx, kind, 200000, seed=202).interior_counts()
        top = 6
        bins = lambda c: [c.get(n, 0) for n in range(1, top)] + [sum(v for k, v in c.items() if k >= top)]  # noqa: E731
        table = np.array([bins(a), bins(b)])
        table = table[:, table.sum(axis=0) > 0]
        _, pvalue, _, _ = chi2_contingency(table)
        assert pvalue > 0.001
