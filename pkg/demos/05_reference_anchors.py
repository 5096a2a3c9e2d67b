"""Closed-form anchors: unit interval energy and Sierpinski gasket constants.

Run: python demos/05_reference_anchors.py
"""
from wlab import reference as ref

c = ref.gasket_constants()
print(f"r = {c.r_sg}, beta = {c.beta_sg:.6f}, d = {c.d_sg:.6f}, d*beta = {c.d_sg * c.beta_sg:.6f}")
for m in range(1, 4):
    print(f"  (1/2)^({m} beta) = {0.5 ** (m * c.beta_sg):.12f}   (3/5)^{m} = {0.6**m:.12f}")

# With weight 2^p the dyadic energy of the ramp from 0 at X to 1 at Y is
# 1/(Y - X) exactly once X and Y are grid points.  With weight 2^-p it dies out.
print("\n p   weight 2^p      weight 2^-p")
for p in range(1, 11):
    print(f"{p:2d}  {ref.interval_energy(0.25, 0.75, p):.10f}  {ref.interval_energy(0.25, 0.75, p, 'inverse'):.3e}")

print("\nnon-dyadic ends (0.1, 0.7):")
for row in ref.interval_energy_table(0.1, 0.7, [4, 8, 12, 16]):
    print(f"  p={row.p:2d}  energy {row.energy:.8f}  error {row.error:+.2e}")
