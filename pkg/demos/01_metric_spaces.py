# Point clouds, distance matrices and the Hausdorff distance.
#
# Run: python demos/01_metric_spaces.py

# %% imports
import numpy as np

from topostat import (
    PointCloud,
    check_standard_assumption,
    euclidean_distance_matrix,
    greedy_covering_number,
    greedy_packing_number,
    hausdorff_distance,
    sample,
    SpaceSpec,
)

# %% a 3-4-5 triangle
dm = euclidean_distance_matrix(PointCloud([[0, 0], [3, 0], [0, 4]]))
print(dm.entries)

# %% Hausdorff distance of a sample to (a fine grid on) the circle
t = np.linspace(0, 2 * np.pi, 20_000, endpoint=False)
circle = PointCloud(np.column_stack([np.cos(t), np.sin(t)]))
rng = np.random.default_rng(0)
for n in (50, 200, 800):
    s = rng.uniform(0, 2 * np.pi, n)
    X = PointCloud(np.column_stack([np.cos(s), np.sin(s)]))
    print(f"n={n:4d}  d_H(X, circle) ~ {hausdorff_distance(X, circle):.4f}")

# %% packing and covering numbers at a few radii
X = sample(SpaceSpec("sphere"), 1000, 1)
D = euclidean_distance_matrix(X)
for r in (0.1, 0.2, 0.4):
    print(f"r={r}: packing >= {greedy_packing_number(D, r)}, covering <= {greedy_covering_number(D, r)}")

# %% the (a, b)-standard assumption on the empirical measure of a uniform sample of [0, 1]
x = np.random.default_rng(2).uniform(0, 1, 2000)
D = euclidean_distance_matrix(PointCloud(x.reshape(-1, 1)))
w = np.full(len(x), 1 / len(x))
rep = check_standard_assumption(D, w, a=0.5, b=1, radius_grid=[0.02, 0.05, 0.1, 0.2])
print("(0.5, 1)-standard on the grid:", rep.passed)
rep = check_standard_assumption(D, w, a=2.0, b=1, radius_grid=[0.02, 0.05, 0.1, 0.2])
print("(2, 1)-standard on the grid:", rep.passed, f"({len(rep.violations)} violations)")
