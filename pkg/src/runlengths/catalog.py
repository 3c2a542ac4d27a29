"""Ready-made measures: the worked examples plus a few small test shapes."""
from __future__ import annotations

import math
from fractions import Fraction

from .measure import Atom, Parallel, Series, TotalLeaf, build_geometric_atoms


def _evenly_spaced(masses):
    n = len(masses)
    return tuple(Atom((k + 1) / (n + 1), m) for k, m in enumerate(masses))


def diffuse(mass=1) -> TotalLeaf:
    """Atomless total order (e.g. exponential waiting times)."""
    return TotalLeaf((), mass)


def die(n: int) -> TotalLeaf:
    """Fair ``n``-sided die, faces bottom to top."""
    return TotalLeaf(_evenly_spaced([Fraction(1, n)] * n))


def dart(p) -> TotalLeaf:
    """Bullseye atom of mass ``p`` at the top of a uniform diffuse part."""
    return TotalLeaf((Atom(1.0, p),), 1 - p)


def two_atom(p=Fraction(1, 3), reverse: bool = False) -> TotalLeaf:
    """``x < y`` with masses ``p`` and ``1 - p``; ``reverse`` swaps the order."""
    lo, hi = (1 - p, p) if reverse else (p, 1 - p)
    return TotalLeaf((Atom(0.3, lo), Atom(0.7, hi)))


def geometric(p, tail_epsilon) -> TotalLeaf:
    """Light-bulb lifetimes: atoms ``p (1-p)^k`` truncated at ``tail_epsilon``."""
    leaf, _ = build_geometric_atoms(p, tail_epsilon)
    return leaf


def geometric_k(p, k: int) -> TotalLeaf:
    """The first ``k`` geometric atoms, with the dropped tail recorded."""
    q = 1 - p
    return TotalLeaf(tuple(Atom(j / (j + 1), p * q**j) for j in range(k)), p * 0, q**k)


def even_die(n: int) -> Parallel:
    """Fair ``2n``-sided die where only same-parity faces are comparable."""
    chain = _evenly_spaced([Fraction(1, 2 * n)] * n)
    return Parallel((TotalLeaf(chain), TotalLeaf(chain)))


def even_die_element(face: int):
    """``(path, atom index)`` of a face of :func:`even_die`."""
    return ((face - 1) % 2,), (face - 1) // 2


def parallel_singletons(k: int = 2) -> Parallel:
    """``k`` mutually incomparable atoms of equal mass."""
    return Parallel(tuple(TotalLeaf((Atom(0.5, Fraction(1, k)),)) for _ in range(k)))


def singleton(mass=1) -> TotalLeaf:
    """Degenerate one-atom measure."""
    return TotalLeaf((Atom(0.5, mass),))


def nested_tree() -> Series:
    """Three levels of composition over seven atoms, total mass 1."""
    a = TotalLeaf((Atom(0.2, Fraction(1, 8)), Atom(0.6, Fraction(1, 16))))
    b = TotalLeaf((Atom(0.5, Fraction(1, 8)),))
    c = TotalLeaf((Atom(0.1, Fraction(3, 16)), Atom(0.9, Fraction(1, 16))))
    d = TotalLeaf((Atom(0.4, Fraction(1, 4)),))
    e = TotalLeaf((Atom(0.3, Fraction(3, 16)),))
    return Series((a, Parallel((b, Series((c, d)))), e))


def qpochhammer(a: float, q: float, n: int | None = None, tol: float = 1e-17) -> float:
    """``(a; q)_n = prod_{k<n} (1 - a q^k)``; ``n=None`` takes the infinite product."""
    out, term, k = 1.0, float(a), 0
    while (n is None and abs(term) > tol) or (n is not None and k < n):
        out *= 1 - term
        term *= q
        k += 1
    return out


def closed_forms(name: str, n: int = 6, p=Fraction(1, 2)) -> dict:
    """Hand-derived means and variances of the worked examples.

    Keys are ``"<kind>.<position>.<mean|variance>"``; values are floats.
    These come from the example formulas themselves, not from the engine.
    """
    e = math.e
    p = float(p)
    if name == "exp":
        return {
            **{f"{k}.initial.mean": e - 1 for k in ("strict", "nonstrict")},
            **{f"{k}.interior.mean": 2.0 for k in ("strict", "nonstrict")},
            **{f"{k}.initial.variance": e * (3 - e) for k in ("strict", "nonstrict")},
            **{f"{k}.interior.variance": 4 * e - 10 for k in ("strict", "nonstrict")},
        }
    if name == "die":
        a, b = 1 + 1 / n, 1 + 1 / (n - 1) if n > 1 else math.inf
        out = {
            "strict.initial.mean": a**n - 1,
            "strict.interior.mean": 2 * n / (n + 1),
            "strict.initial.variance": a**n - a ** (2 * n) + 2 * a ** (n - 1),
            "strict.interior.variance": 4 * a ** (n - 1) - 6 / a - 4 / a**2,
        }
        if n > 1:
            out.update({
                "nonstrict.initial.mean": b**n - 1,
                "nonstrict.interior.mean": 2 * n / (n - 1),
                "nonstrict.initial.variance": b**n - b ** (2 * n) + 2 * b ** (n + 1),
                "nonstrict.interior.variance": 4 * b ** (n + 1) - 6 * b - 4 * b**2,
            })
        return out
    if name == "dart":
        s = math.exp(1 - p) * (1 + p)
        t = math.exp(1 - p) / (1 - p)
        return {
            "strict.initial.mean": s - 1,
            "nonstrict.initial.mean": t - 1,
            "strict.interior.mean": 2 / (1 + p * p),
            "nonstrict.interior.mean": 2 / (1 - p * p),
            "strict.initial.variance": s * (3 - s - 2 * p * p / (1 + p)),
            "nonstrict.initial.variance": t * (3 - t + 2 * p * p / (1 - p)),
            "strict.interior.variance": 2 / (1 + p * p) * (-3 + 2 * s - 2 / (1 + p * p)),
            "nonstrict.interior.variance": 2 / (1 - p * p) * (-3 + 2 * t - 2 / (1 - p * p)),
        }
    if name == "bulb":
        q = 1 - p
        up = qpochhammer(-p, q)
        down = 1 / qpochhammer(p, q)
        s_up = _geometric_atom_sum(p, lambda m: m * m / (1 + m))
        s_down = _geometric_atom_sum(p, lambda m: m * m / (1 - m))
        return {
            "strict.initial.mean": up - 1,
            "nonstrict.initial.mean": down - 1,
            "strict.interior.mean": 2 - p,
            "nonstrict.interior.mean": (2 - p) / (1 - p),
            "strict.initial.variance": up * (3 - up - 2 * s_up),
            "nonstrict.initial.variance": down * (3 - down + 2 * s_down),
            "strict.interior.variance": (2 - p) * (p - 5 + 2 * up),
            "nonstrict.interior.variance": (2 - p) / (1 - p) * ((4 * p - 5) / (1 - p) + 2 * down),
        }
    if name == "evendie":
        return {
            "strict.initial.mean": 2 * (1 + 1 / (2 * n)) ** n - 2,
            "nonstrict.initial.mean": 2 * (1 + 1 / (2 * n - 1)) ** n - 2,
            "strict.interior.mean": 4 * n / (3 * n + 1),
            "nonstrict.interior.mean": 4 * n / (3 * n - 1),
        }
    raise KeyError(f"unknown example {name!r}")


def _geometric_atom_sum(p, fn, tol=1e-18):
    total, m = 0.0, p
    while m > tol:
        total += fn(m)
        m *= 1 - p
    return total


EXAMPLES = ("exp", "die", "dart", "bulb", "evendie")


def example_measure(name: str, n: int = 6, p=Fraction(1, 2), eps=1e-12):
    """Measure behind a named worked example."""
    if name == "exp":
        return diffuse(1)
    if name == "die":
        return die(n)
    if name == "dart":
        return dart(p)
    if name == "bulb":
        return geometric(p, eps)
    if name == "evendie":
        return even_die(n)
    raise KeyError(f"unknown example {name!r}")
