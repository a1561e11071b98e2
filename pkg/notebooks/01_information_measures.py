"""
Information measures on discrete and Gaussian pairs
====================================================

Mutual information grows without limit as two variables become more
dependent. The Jensen-Shannon information between a joint law and the product
of its marginals never exceeds log 2. This script prints both for two families.
"""

import numpy as np

from genbound import (
    DiscreteJoint,
    GaussianPair,
    gaussian_js_information,
    gaussian_mutual_information,
    js_information,
    mutual_information,
)
from genbound.discrete_oracle import noisy_diagonal_joint

# A K x K joint that puts most of its mass on the diagonal. MI approaches log K,
# while I_JS saturates well below log 2.
print("noisy diagonal joints (noise 0.05)")
print(f"{'K':>5} {'MI':>8} {'I_JS':>8}")
for k in (2, 4, 16, 64, 256):
    j = noisy_diagonal_joint(k, 0.05)
    print(f"{k:5d} {mutual_information(j):8.4f} {js_information(j):8.4f}")

# Perfect copying of a fair bit: MI = log 2 and I_JS is its own closed form.
copy = DiscreteJoint(np.array([[0.5, 0.0], [0.0, 0.5]]))
print("\nfair bit copied:", mutual_information(copy), js_information(copy))

# Bivariate standard Gaussians with correlation rho. MI has a closed form; I_JS
# comes from quadrature of the mixture entropy.
print("\nGaussian pairs")
print(f"{'rho':>9} {'MI':>9} {'I_JS':>9}")
for rho in (0.0, 0.3, 0.6, 0.9, 0.99, 0.999, 0.99999):
    g = GaussianPair(rho=rho)
    print(f"{rho:9.5f} {gaussian_mutual_information(rho):9.4f} {gaussian_js_information(g):9.4f}")
print(f"log 2 = {np.log(2):.4f}")
