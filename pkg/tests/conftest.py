from fractions import Fraction

import pytest
from hypothesis import strategies as st

from runlengths import catalog
from runlengths.measure import Atom, Parallel, Series, TotalLeaf, map_masses, normalize


def atomic_corpus():
    """The purely atomic probability measures every exact check runs over."""
    return {
        "two_atom": catalog.two_atom(Fraction(1, 3)),
        "die2": catalog.die(2),
        "die3": catalog.die(3),
        "die6": catalog.die(6),
        "even_die2": catalog.even_die(2),
        "even_die3": catalog.even_die(3),
        "par_singletons": catalog.parallel_singletons(2),
        "geometric_k6": normalize(catalog.geometric_k(Fraction(1, 2), 6)),
        "nested": catalog.nested_tree(),
    }


CORPUS = atomic_corpus()


@pytest.fixture(params=sorted(CORPUS))
def corpus_item(request):
    return request.param, CORPUS[request.param]


# -- hypothesis strategies ----------------------------------------------------

_weight = st.integers(min_value=1, max_value=6)


@st.composite
def _leaf(draw, diffuse):
    k = draw(st.integers(min_value=0 if diffuse else 1, max_value=3))
    atoms = tuple(Atom((j + 1) / (k + 1), Fraction(draw(_weight))) for j in range(k))
    d = Fraction(draw(st.integers(0, 3))) if diffuse else Fraction(0)
    if not atoms and not d:
        d = Fraction(1)
    return TotalLeaf(atoms, d)


def _tree(diffuse):
    return st.recursive(
        _leaf(diffuse),
        lambda kids: st.one_of(
            st.lists(kids, min_size=1, max_size=3).map(lambda c: Series(tuple(c))),
            st.lists(kids, min_size=1, max_size=3).map(lambda c: Parallel(tuple(c))),
        ),
        max_leaves=5,
    )


def _scaled(expr):
    from runlengths.measure import total_mass
    t = total_mass(expr)
    return map_masses(expr, lambda m: m / t)


def probability_trees(diffuse=True):
    """Random rational probability measures on series-parallel trees."""
    return _tree(diffuse).map(_scaled)


def atomic_trees():
    """Random atomic measures with positive integer-weight masses scaled down by 8."""
    return _tree(False).map(lambda e: map_masses(e, lambda m: m / 8))


# -- acceptance summary -----------------------------------------------------------

ACCEPTANCE = {}


def record(criterion: int, title: str, passed: bool, detail: str = ""):
    ACCEPTANCE[criterion] = (title, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[k]
        line = f"{'PASS' if ok else 'FAIL'}  [{k}] {title}"
        terminalreporter.write_line(line + (f": {detail}" if detail else ""))
