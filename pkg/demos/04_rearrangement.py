"""
Rearranging atoms
=================

Swapping which value carries which mass leaves every run-length
distribution unchanged, while record probabilities move.
"""
from fractions import Fraction

from runlengths import catalog
from runlengths.measure import rearrange_atoms
from runlengths.oracle import oracle_record_probability
from runlengths.runfunc import NONSTRICT, STRICT, run_coefficients

xy = catalog.two_atom(Fraction(1, 3))
yx = rearrange_atoms(xy, [1, 0])

for kind in (STRICT, NONSTRICT):
    same = run_coefficients(xy, kind).coeffs == run_coefficients(yx, kind).coeffs
    print(f"{kind.value} run coefficients identical: {same}")

for n in range(1, 6):
    a, b = oracle_record_probability(xy, n), oracle_record_probability(yx, n)
    print(f"n={n}  P(record | xy)={a}  P(record | yx)={b}  gap={a - b}")
