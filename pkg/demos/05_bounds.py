# Tail bound, minimax rates, confidence radius and the two-point lower bounds.
#
# Run: python demos/05_bounds.py

# %% imports
import math

import numpy as np

from topostat import (
    boundary_density_lower_bound,
    confidence_radius,
    dirac_pair_demo,
    hausdorff_tail_bound,
    lecam_bound,
    manifold_lower_bound,
    minimax_rate,
    minimax_rate_density,
    minimax_rate_manifold,
    psi,
    psi_inverse,
)

# %% the tail bound against simulation: uniform measure on [0, 1] is (1, 1)-standard
rng = np.random.default_rng(0)
for n, eps in [(200, 0.02), (200, 0.03), (500, 0.01)]:
    x = np.sort(rng.uniform(0, 1, (2000, n)), axis=1)
    dh = np.maximum.reduce([x[:, 0], 1 - x[:, -1], np.diff(x, axis=1).max(axis=1) / 2])
    print(f"n={n} eps={eps}: P(d_H > 2 eps) ~ {np.mean(dh > 2 * eps):.4f} <= {hausdorff_tail_bound(1, 1, n, eps):.4f}")

# %% rates
for n in (100, 1000, 10_000):
    print(n, minimax_rate(1, n), minimax_rate(2, n), minimax_rate_density(2, 1, n), minimax_rate_manifold(2, n))

# %% confidence radius through the inverse of psi(eta) = exp(-eta) / eta
print(psi_inverse(math.exp(-1)), psi(psi_inverse(1e-6)))
for n in (100, 1000, 10_000):
    print(f"n={n}: radius at level 0.05 = {confidence_radius(1, 2, n, 0.05):.4f}")

# %% Le Cam two-point bounds
print(dirac_pair_demo(2, 1.0))
tv, db, bound = dirac_pair_demo(10 ** 6, 1.0)
print(tv, db, bound, (1 - tv) ** (2 * 10 ** 6), math.exp(-4))
print(lecam_bound(1.0, 0.0, 10), lecam_bound(1.0, 1.0, 10))
print(boundary_density_lower_bound(d=2, alpha=1.0, C_a=1.0, eps_n=1000 ** (-1 / 3), n=1000))
print(manifold_lower_bound(C=1.0, gamma=0.01, d=2, n=100))
