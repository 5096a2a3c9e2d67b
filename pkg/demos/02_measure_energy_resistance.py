"""Self-similar measure, renormalized energy and the resistance metric.

Run: python demos/02_measure_energy_resistance.py
"""
import numpy as np

from wlab import energy as en
from wlab import geometry as g
from wlab import measure as ms

p = g.make_params(0.5, 3)

w = ms.measure_weights(p)
print("raw area ratios      ", np.round(w.raw, 6), " sum", round(sum(w.raw), 6))
print("normalized weights   ", np.round(w.normalized, 6))

# The vertex quadrature integrates constants exactly with kappa = 1/nb.
for m in range(4):
    n = len(g.vertex_chain(p, m))
    print(f"m={m}: integral of 1 = {ms.integrate(p, m, np.ones(n)):.15f}")

# Harmonic extension on the chain is linear interpolation inside each edge, so
# the plain sum of squared increments drops by exactly nb per level.  The two
# normalizations differ only in what multiplies that sum.
b = [0.0, 1.0, 0.2]
print("\n m   conservative         paper")
for m in range(6):
    u = en.dirichlet_solve(p, m, b)
    print(f"{m:2d}  {en.energy(p, m, u, 'conservative'):.10e}  {en.energy(p, m, u, 'paper'):.10e}")
print(f"paper-mode growth per level: nb^(4-2D_W) = {3 ** (4 - 2 * p.d_w):.6f}")

# Pointwise Laplacian: zero on harmonic functions, and a diagnostic table for x^2.
u = en.dirichlet_solve(p, 3, b)
print("\nmax |Delta u| for a harmonic u:", max(abs(en.pointwise_laplacian(p, u, k, 3)) for k in (1, 5, 13, 40)))
for row in en.pointwise_laplacian_table(p, lambda x, y: x**2, 1 / 3, range(1, 6), "conservative"):
    print(f"  x^2 at x=1/3, level {row.level}: {row.value:+.6e}  ratio {row.ratio:.4f}")

# Resistance between chain vertices is the number of edges between them
# divided by the level weight.
print("\nresistance from P_0")
for m in range(4):
    n = len(g.vertex_chain(p, m))
    print(f"m={m}: R(P_0,P_1)={en.resistance(p, m, 0, (n - 1) // 2):.4e}  R(P_0,P_2)={en.resistance(p, m, 0, n - 1):.4e}")

for lam in (0.5, 0.25):
    q = g.make_params(lam, 3, strict=False)
    d = en.resistance_dimension(q)
    print(f"lambda={lam}: case {d.case}, d={d.d:.6f}, alpha=d/(d+1)={en.spectral_exponent(d.d):.6f}")
