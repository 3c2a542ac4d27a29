"""
Checking the theory by simulation
=================================

Run-length histograms from a long i.i.d. sample path, and the ratio of
length-1 runs converging along the path.
"""
import numpy as np

from runlengths import catalog
from runlengths.runfunc import STRICT
from runlengths.simulate import simulate_histogram, slln_trace, summarize
from runlengths.stats import INTERIOR, pgf

die = catalog.die(6)
h = simulate_histogram(die, STRICT, 10**6, seed=7)
emp = summarize(h.interior_counts())
theory, _ = pgf(die, STRICT, INTERIOR, 10)

# %%
print(" n   empirical   theory")
for n in range(1, 7):
    print(f"{n:2d}  {emp.pmf.get(n, 0.0):9.5f}  {float(theory[n]):9.5f}")
print(f"mean {emp.mean:.5f} +- {emp.mean_se:.5f} (theory 12/7 = {12 / 7:.5f})")

# %%
checkpoints = np.unique(np.logspace(2, 6, 9).astype(int))
for b, r in slln_trace(die, STRICT, 1, checkpoints, seed=7):
    print(f"b={b:8d}  U/W={r:.5f}  error={abs(r - 4 / 9):.2e}")
