"""Eigenvalue counting and the log-periodic Weyl factor.

Run: python demos/04_weyl_counting.py
"""
import math

from wlab import geometry as g
from wlab import spectral as sp

p = g.make_params(0.5, 3)

# Every eigenvalue lies below 4, so at x = 4 eta nb^m the count is the full
# Dirichlet dimension 2 nb^m - 2.
for m in range(1, 5):
    x = sp.scaled_top(p, m)
    print(f"m={m}: N({x:.1f}) = {sp.counting_function(p, m, x, 'paper')}")

table = sp.weyl_analysis(p, range(1, 8))
print("\n m     N    ln N / m   ln(N_m/N_m-1)")
for m, n, r, step in table.rows:
    print(f"{m:2d} {n:5d}   {r:.5f}    {step:.5f}")
print(f"ln 3 = {math.log(3):.5f}; ln N / m approaches it only like ln 2 / m")

print("\nN(x)/x at level m vs N(nb x)/(nb x) at level m+1, top decade")
for m, gap in table.periodicity:
    print(f"  {m}->{m + 1}: max relative gap {gap:.4f}")

print("\nsamples at the top level")
for x, n, r in table.samples[::8]:
    print(f"  x={x:12.2f}  N={n:5d}  N/x={r:.6f}")
