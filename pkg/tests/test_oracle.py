from fractions import Fraction

import pytest

from runlengths import catalog
from runlengths.errors import BudgetExceeded, DegenerateMeasure, DiffuseUnsupported, NotTotalOrder
from runlengths.measure import rearrange_atoms
from runlengths.oracle import (
    AtomTable, oracle_record_probability, oracle_run_coefficient, oracle_run_length_pmf,
)
from runlengths.runfunc import NONSTRICT, STRICT
from runlengths.simulate import Relation
from runlengths.stats import INITIAL, INTERIOR

F = Fraction


def test_coefficient_examples():
    assert oracle_run_coefficient(catalog.two_atom(F(1, 3)), STRICT, 2) == F(2, 9)
    assert oracle_run_coefficient(catalog.die(6), STRICT, 3) == F(5, 54)
    assert oracle_run_coefficient(catalog.parallel_singletons(2), NONSTRICT, 3) == F(1, 4)
    assert oracle_run_coefficient(catalog.die(6), STRICT, 0) == 1


def test_pmf_examples():
    assert oracle_run_length_pmf(catalog.singleton(), STRICT, INITIAL, 1) == 1
    assert oracle_run_length_pmf(catalog.die(6), STRICT, INTERIOR, 1) == F(4, 9)
    assert oracle_run_length_pmf(catalog.two_atom(F(1, 3)), STRICT, INITIAL, 2) == F(2, 9)
    with pytest.raises(DegenerateMeasure):
        oracle_run_length_pmf(catalog.singleton(), NONSTRICT, INTERIOR, 1)


def test_record_probability_examples():
    xy = catalog.two_atom(F(1, 3))
    yx = rearrange_atoms(xy, [1, 0])
    assert oracle_record_probability(xy, 2) == F(19, 27)
    assert oracle_record_probability(yx, 2) == F(17, 27)
    assert oracle_record_probability(catalog.singleton(), 3) == 1
    with pytest.raises(NotTotalOrder):
        oracle_record_probability(catalog.even_die(2), 2)


def test_record_sensitivity_vs_run_insensitivity():
    xy = catalog.two_atom(F(1, 3))
    yx = rearrange_atoms(xy, [1, 0])
    for n in (2, 3, 4):
        assert oracle_record_probability(xy, n) != oracle_record_probability(yx, n)
        assert (oracle_record_probability(xy, n) - oracle_record_probability(yx, n)
                == F(3**n - 2 ** (n + 1) + 1, 3 ** (n + 1)))
    for kind in (STRICT, NONSTRICT):
        for pos in (INITIAL, INTERIOR):
            for n in range(1, 5):
                assert oracle_run_length_pmf(xy, kind, pos, n) == oracle_run_length_pmf(yx, kind, pos, n)


def test_guards():
    with pytest.raises(DiffuseUnsupported):
        oracle_run_coefficient(catalog.dart(F(1, 2)), STRICT, 2)
    with pytest.raises(BudgetExceeded):
        oracle_run_coefficient(catalog.die(6), STRICT, 8, budget=1000)


def test_atom_table():
    t = AtomTable.from_measure(catalog.even_die(2))
    assert len(t) == 4 and t.total_mass() == 1
    assert t.order[0][1] is Relation.LESS
    assert t.order[0][2] is Relation.INCOMPARABLE
    assert all(t.order[i][i] is Relation.EQUAL for i in range(4))


def test_raw_truncated_geometric_coefficients():
    raw = catalog.geometric_k(F(1, 2), 6)
    from runlengths.runfunc import run_coefficients
    for kind in (STRICT, NONSTRICT):
        L = run_coefficients(raw, kind, 8).coeffs
        assert all(oracle_run_coefficient(raw, kind, n) == L[n] for n in range(9))
