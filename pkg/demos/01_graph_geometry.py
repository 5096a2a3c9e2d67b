"""Build the level-m graph approximations and look at their geometry.

Run: python demos/01_graph_geometry.py
"""
import numpy as np

from wlab import geometry as g
from wlab.boxcount import box_count, box_dimension

p = g.make_params(0.5, 3)
print(f"lambda={p.lam} nb={p.nb}  D_W={p.d_w:.6f}  eta={p.eta:.6f}")

# The three fixed points of the IFS form V_0.
for i, P in enumerate(g.fixed_points(p)):
    print(f"P_{i} = ({P[0]:.4f}, {P[1]:.4f})")

# Each level maps the previous chain through every contraction.  Images of
# neighbouring cells share an endpoint, so the chain has (nb-1) nb^m + 1 points.
for m in range(5):
    chain = g.vertex_chain(p, m)
    print(f"V_{m}: {len(chain):4d} vertices, {chain.n_coincident:3d} merged duplicates")

# Heights of the edges T_M(P_j) T_M(P_j+1) shrink like L_m^(2 - D_W).
print("\nedge heights")
for m in range(1, 6):
    eh = g.edge_heights(p, m, refine=3)
    print(
        f"m={m}  max h={eh.height.max():.4e}  bound={eh.upper_bound:.4e}  "
        f"max extent over edge={eh.extent.max():.4e}"
    )

# Box counting over the columns of width L_m, graph sampled 4 levels deeper.
print("\nbox counts")
for m in range(2, 7):
    bc = box_count(p, m)
    print(f"m={m}  side={bc.side:.3e}  count={bc.count:7d}  bound={bc.bound:.3e}")
fit = box_dimension(p, range(2, 8))
print(f"fitted slope {fit.slope:.4f}  vs D_W {p.d_w:.4f}")

# Steeper decay (smaller lambda) flattens the graph and lowers the dimension.
for lam in (0.4, 0.6, 0.8):
    q = g.make_params(lam, 3)
    s = box_dimension(q, range(2, 7), refine=3).slope
    print(f"lambda={lam}: slope {s:.4f}  D_W {q.d_w:.4f}  diff {abs(s - q.d_w):.3f}")
