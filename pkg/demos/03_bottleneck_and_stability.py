# Bottleneck distance and the stability inequality d_b <= 2 d_H.
#
# Run: python demos/03_bottleneck_and_stability.py

# %% imports
import math

import numpy as np

from topostat import (
    Builder,
    PersistenceDiagram,
    PointCloud,
    bottleneck_distance,
    bottleneck_matching,
    brute_force_bottleneck,
    stability_gap,
)

# %% small examples
D = PersistenceDiagram.from_pairs
print(bottleneck_distance(D(0, [(0, 2)]), D(0, [])))                # 1: to the diagonal
print(bottleneck_distance(D(0, [(0, 2)]), D(0, [(0, 2.5)])))        # 0.5: direct match
print(bottleneck_distance(D(0, [(0, 1), (0, 3)]), D(0, [(0, 3)])))  # 0.5
print(bottleneck_distance(D(0, [(0, math.inf)]), D(0, [])))         # inf: essential counts differ
m = bottleneck_matching(D(0, [(0, 1), (0, 3)]), D(0, [(0, 3)]))
print(m.cost, m.pairs)

# %% against the exhaustive oracle
rng = np.random.default_rng(1)
for _ in range(5):
    b = rng.uniform(0, 1, (2, 5))
    a, c = D(0, list(zip(b[0], b[0] + rng.uniform(0, 1, 5)))), D(0, list(zip(b[1], b[1] + rng.uniform(0, 1, 5))))
    print(f"{bottleneck_distance(a, c):.6f}  {brute_force_bottleneck(a, c):.6f}")

# %% stability on a jittered circle
t = rng.uniform(0, 2 * np.pi, 60)
X = np.column_stack([np.cos(t), np.sin(t)])
for delta in (0.01, 0.05, 0.1):
    Xp = X + rng.uniform(-delta, delta, X.shape)
    for kind in ("rips", "cech"):
        db, bound = stability_gap(PointCloud(X), PointCloud(Xp), Builder(kind, math.inf, 2), 1)
        print(f"delta={delta:<5} {kind:5s} d_b={db:.4f} <= 2 d_H={bound:.4f}")
