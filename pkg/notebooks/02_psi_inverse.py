"""
The generalized inverse of a CGF envelope
==========================================

For an envelope psi the bounds need inf over lam of (x + psi(lam)) / lam.
For a subgaussian envelope this is sqrt(2 sigma^2 x). For other envelopes it
has no closed form and is found by a one-dimensional search over log(lam).
"""

import math

import numpy as np

from genbound import CgfEnvelope, SubgaussianEnvelope, TabulatedEnvelope, psi_star_inverse

env = SubgaussianEnvelope(1.0)
print(f"{'x':>10} {'search':>14} {'sqrt(2x)':>14}")
for x in np.geomspace(1e-4, 1e2, 7):
    print(f"{x:10.4g} {psi_star_inverse(env, x):14.10f} {math.sqrt(2 * x):14.10f}")

# A sub-gamma style envelope lam^2 v / (2 (1 - c lam)) on [0, 1/c).
v, c = 1.0, 0.5
gamma_like = CgfEnvelope(lambda lam: lam * lam * v / (2 * (1 - c * lam)), domain_bound=1 / c)
print("\nsub-gamma envelope, v=1, c=0.5")
for x in (0.01, 0.1, 1.0, 10.0):
    closed = math.sqrt(2 * v * x) + c * x
    print(f"x={x:6.2f}  search={psi_star_inverse(gamma_like, x):.8f}  sqrt(2vx)+cx={closed:.8f}")

# The same subgaussian envelope given as a table of samples.
lam = np.linspace(0.0, 10.0, 2001)
table = TabulatedEnvelope(lam, 0.5 * lam**2)
print("\ntabulated lam^2/2 at x=2:", psi_star_inverse(table, 2.0))
