"""Dirichlet spectra of the level graphs and their decimation genealogy.

Run: python demos/03_spectral_decimation.py
"""
import numpy as np

from wlab import geometry as g
from wlab import spectral as sp

p = g.make_params(0.5, 3)

# Only the chain edges carry the Laplacian, so each spectrum is that of two
# paths glued at the middle fixed point: 2 - 2 cos(k pi / 3^m), twice each.
for m in (1, 2):
    print(f"level {m}:", ", ".join(f"{v:.6f} x{k}" for v, k in sp.direct_spectrum(p, m).entries))
for m in range(1, 6):
    d, o = sp.direct_spectrum(p, m), sp.oracle_spectrum(p, m)
    print(f"m={m}: {d.total:4d} eigenvalues, max |direct - closed form| = {np.max(np.abs(d.values - o.values)):.1e}")

# One step of decimation: each parent gives up to 2 nb real children.
print("\nchildren of 1:", sorted({round(c.value, 9) for e in (1, -1) for c in sp.decimate_step(p, 1.0, e)}))
print("children of 3:", sorted({round(c.value, 9) for e in (1, -1) for c in sp.decimate_step(p, 3.0, e)}))

tree = sp.decimation_tree(p, 4)
for rep in tree.reports[1:]:
    print(
        f"\nlevel {rep.level}: {len(rep.continued)} continued, newborn {np.round(rep.newborn, 9)}, "
        f"spurious {rep.spurious}, reconciled={rep.reconciled}"
    )
    for label, v, claimed, got in rep.stated_claims:
        print(f"   {label:28s} {v:.9f}  stated multiplicity {claimed}, eigensolve {got}")

# A level-1 eigenfunction carried to level 2 for one of its continuations.
u1 = np.array([0.0, np.sin(np.pi / 3), np.sin(2 * np.pi / 3), 0.0, 0.0, 0.0, 0.0])
child = max(c.value for c in sp.decimate_step(p, 1.0, 1))
u2 = sp.extend_eigenfunction(p, 2, u1, child)
print(f"\nextended eigenfunction for {child:.6f}: residual {np.max(np.abs(sp.eigen_residual(u2, child, 3, 2))):.1e}")
