"""
Building orders from pieces
===========================

Run functions compose: series stacking multiplies them, parallel placement
adds their excess over one.  The oracle enumerates tuples directly and
agrees exactly.
"""
from fractions import Fraction

from runlengths import catalog
from runlengths.measure import Parallel, Series, TotalLeaf, Atom, serialize_measure_spec
from runlengths.oracle import oracle_run_coefficient
from runlengths.runfunc import NONSTRICT, STRICT, run_coefficients

F = Fraction

low = TotalLeaf((Atom(0.2, F(1, 4)), Atom(0.8, F(1, 4))))
high = TotalLeaf((Atom(0.5, F(1, 2)),))

stacked = Series((low, high))
side = Parallel((low, high))

# %%
for name, expr in (("series", stacked), ("parallel", side)):
    L = run_coefficients(expr, STRICT, 4).coeffs
    print(name, [str(x) for x in L])
    print("  oracle", [str(oracle_run_coefficient(expr, STRICT, n)) for n in range(5)])

# %%
# The nested tree used by the test corpus, as a spec document.
tree = catalog.nested_tree()
print(serialize_measure_spec(tree, indent=1)[:300], "...")
print("non-strict L_0..L_5:", [str(x) for x in run_coefficients(tree, NONSTRICT, 5).coeffs])
