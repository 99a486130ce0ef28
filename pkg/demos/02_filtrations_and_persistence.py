# Rips, Cech and alpha filtrations and their persistence diagrams.
#
# Run: python demos/02_filtrations_and_persistence.py

# %% imports
import math

import numpy as np

from topostat import (
    PointCloud,
    betti_at,
    build_alpha_2d,
    build_cech,
    build_rips,
    diagram_betti,
    euclidean_distance_matrix,
    minimal_enclosing_ball,
    persistence_diagram,
)

# %% the equilateral triangle under the three constructions
tri = PointCloud([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])
for name, f in [
    ("rips", build_rips(euclidean_distance_matrix(tri), math.inf, 2)),
    ("cech", build_cech(tri, math.inf, 2)),
    ("alpha", build_alpha_2d(tri)),
]:
    print(name, [(s, round(v, 5)) for s, v in f])
    print("   diagram:", persistence_diagram(f).points.tolist())

# %% minimal enclosing balls: an obtuse triangle is enclosed by its longest edge
print(minimal_enclosing_ball([[0, 0], [4, 0], [1, 0.5]]))

# %% a noisy circle: one long H1 bar
rng = np.random.default_rng(0)
t = rng.uniform(0, 2 * np.pi, 300)
X = PointCloud(np.column_stack([np.cos(t), np.sin(t)]) + rng.normal(0, 0.03, (300, 2)))
d = persistence_diagram(build_alpha_2d(X))
h1 = d.in_dim(1)
top = h1[np.argmax(h1[:, 1] - h1[:, 0])]
print(f"alpha H1: {len(h1)} points, most persistent ({top[0]:.3f}, {top[1]:.3f})")

# %% the clearing and plain reductions agree; a rank oracle agrees on small complexes
Y = PointCloud(rng.normal(size=(8, 2)))
f = build_rips(euclidean_distance_matrix(Y), math.inf, 2)
assert persistence_diagram(f) == persistence_diagram(f, clearing=False)
s, u = np.quantile(f.order_value, [0.3, 0.6])
print("beta_1(s, t) from the diagram:", diagram_betti(persistence_diagram(f), s, u, 1), " rank oracle:", betti_at(f, s, u, 1))
