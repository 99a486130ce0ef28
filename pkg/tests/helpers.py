import itertools

import numpy as np

from topostat.complexes import Filtration


def random_filtration(rng, max_vertices=8, maxdim=2, ties=True):
    """Random closed filtration: a random complex with monotone random values."""
    n = int(rng.integers(1, max_vertices + 1))
    simplices = [(v,) for v in range(n)]
    for k in range(1, maxdim + 1):
        p = float(rng.uniform(0.2, 0.9))
        have = set(simplices)
        for sx in itertools.combinations(range(n), k + 1):
            faces = [sx[:i] + sx[i + 1 :] for i in range(k + 1)]
            if all(f in have for f in faces) and rng.random() < p:
                simplices.append(sx)
    value = {}
    for sx in simplices:
        v = float(rng.integers(0, 5)) if ties else float(rng.uniform(0, 4))
        if len(sx) > 1:
            v = max([v] + [value[sx[:i] + sx[i + 1 :]] for i in range(len(sx))])
        value[sx] = v
    return Filtration.from_entries(value.items())


def random_rips_input(rng, n_max=8):
    from topostat.metric import PointCloud, euclidean_distance_matrix

    n = int(rng.integers(1, n_max + 1))
    # coarse lattice coordinates give many equal distances
    pts = rng.integers(0, 4, size=(n, 2)).astype(float) + rng.uniform(0, 1e-3, (n, 2)) * (rng.random() < 0.5)
    return euclidean_distance_matrix(PointCloud(pts))


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE = []


def report(label, ok, detail):
    line = f"criterion {label}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok
