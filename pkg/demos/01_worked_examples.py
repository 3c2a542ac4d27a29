"""
Run lengths of the classic examples
===================================

Exact and closed-form run statistics for a fair die, exponential waiting
times, a dart board with a bullseye, geometric light-bulb lifetimes and the
parity-constrained die.
"""
from fractions import Fraction

from runlengths import catalog
from runlengths.runfunc import NONSTRICT, STRICT
from runlengths.stats import INITIAL, INTERIOR, mean, variance

# %%
# A fair six-sided die.  Rational masses keep every answer exact.
die = catalog.die(6)
for kind in (STRICT, NONSTRICT):
    for pos in (INITIAL, INTERIOR):
        print(f"die6 {kind.value:9} {pos.value:8} mean={mean(die, kind, pos)}")

# %%
# Continuous draws: strict and non-strict runs coincide.
exp = catalog.diffuse(1.0)
print("exp initial mean", mean(exp, STRICT, INITIAL), "variance", variance(exp, STRICT, INITIAL))
print("exp interior mean", mean(exp, STRICT, INTERIOR), "variance", variance(exp, STRICT, INTERIOR))

# %%
# Dart board: a bullseye atom of mass p on top of a uniform board.
for p in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
    dart = catalog.dart(p)
    print(f"dart p={p}: strict {float(mean(dart, STRICT, INTERIOR)):.4f}, "
          f"nonstrict {float(mean(dart, NONSTRICT, INTERIOR)):.4f}")

# %%
# Light-bulb lifetimes: countably many atoms, truncated once the tail is tiny.
bulb = catalog.geometric(Fraction(1, 2), 1e-12)
print("bulb atoms kept:", len(bulb.atoms), "dropped mass:", float(bulb.dropped))
print("bulb interior means", float(mean(bulb, STRICT, INTERIOR)), float(mean(bulb, NONSTRICT, INTERIOR)))

# %%
# Even-sided die as a partial order: odd and even faces are incomparable.
for n in (1, 2, 3, 6):
    ev = catalog.even_die(n)
    print(f"2n={2 * n:2d}  strict interior {mean(ev, STRICT, INTERIOR)}  "
          f"strict initial {mean(ev, STRICT, INITIAL)}")
