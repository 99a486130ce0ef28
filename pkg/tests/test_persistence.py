import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_filtration, random_rips_input
from topostat.complexes import Filtration, build_cech, build_rips
from topostat.errors import ResourceCapError
from topostat.metric import PointCloud, euclidean_distance_matrix
from topostat.persistence import (
    BoundaryMatrix,
    PersistenceDiagram,
    betti_at,
    boundary_matrix,
    diagram_betti,
    extract_diagram,
    persistence_diagram,
    reduce,
)

EQ = PointCloud([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])


def hexagon():
    t = np.arange(6) * np.pi / 3
    return PointCloud(np.column_stack([np.cos(t), np.sin(t)]))


def pts(d):
    return sorted(map(tuple, d.points.tolist()))


def test_boundary_small():
    f = Filtration.from_entries([((0,), 0.0), ((1,), 0.0), ((0, 1), 1.0)])
    assert boundary_matrix(f).columns == [(), (), (0, 1)]
    tri = build_rips(euclidean_distance_matrix(EQ), np.inf, 2)
    m = boundary_matrix(tri)
    assert len(m.columns[-1]) == 3 and set(m.columns[-1]) == {3, 4, 5}


def test_boundary_of_boundary():
    rng = np.random.default_rng(0)
    f = build_rips(euclidean_distance_matrix(PointCloud(rng.normal(size=(8, 2)))), np.inf, 3)
    m = boundary_matrix(f)
    cols = m.columns
    for j, col in enumerate(cols):
        assert all(i < j for i in col)
        acc = set()
        for i in col:
            acc ^= set(cols[i])
        assert not acc
        k = int(m.dims[j])
        assert len(col) == (k + 1 if k else 0)


@pytest.mark.parametrize("clearing", [True, False])
def test_reduce_examples(clearing):
    f = Filtration.from_entries([((0,), 0.0), ((1,), 0.0), ((0, 1), 1.0)])
    p = reduce(boundary_matrix(f), clearing=clearing)
    assert p.pairs == ((1, 2),) and p.essential == (0,)
    tri = build_rips(euclidean_distance_matrix(EQ), np.inf, 2)
    p = reduce(boundary_matrix(tri), clearing=clearing)
    assert p.essential == (0,)
    assert (5, 6) in p.pairs or any(d == 6 and tri.dim(b) == 1 for b, d in p.pairs)
    d = extract_diagram(p, tri)
    assert d.essential(0).tolist() == [0.0] and len(d.finite(0)) == 2 and len(d.in_dim(1)) == 0


def test_extract_examples():
    d = persistence_diagram(build_cech(EQ, np.inf, 2))
    assert len(d) == 4
    assert d.essential(0).tolist() == [0.0]
    assert np.allclose(d.finite(0), [[0, 0.5], [0, 0.5]])
    (b, de), = d.in_dim(1).tolist()
    assert abs(b - 0.5) < 1e-12 and abs(de - 1 / math.sqrt(3)) < 1e-12
    single = Filtration.from_entries([((0,), 0.0)])
    assert pts(persistence_diagram(single)) == [(0, 0, math.inf)]
    rng = np.random.default_rng(1)
    f = build_rips(euclidean_distance_matrix(PointCloud(rng.normal(size=(30, 2)))), np.inf, 1)
    assert len(persistence_diagram(f).essential(0)) == 1


def test_betti_examples():
    f = build_rips(euclidean_distance_matrix(hexagon()), np.inf, 2)
    assert betti_at(f, 1.0 + 1e-9, 1.0 + 1e-9, 1) == 1
    assert betti_at(f, 1.0 - 1e-9, 1.0 - 1e-9, 1) == 0
    two = Filtration.from_entries([((0,), 1.0), ((1,), 1.0), ((0, 1), 2.0)])
    assert betti_at(two, 0.5, 0.5, 0) == 0
    assert betti_at(two, 1.5, 1.5, 0) == 2
    assert betti_at(two, 1e300, 1e300, 0) == 1
    big = build_rips(euclidean_distance_matrix(PointCloud(rng_points(13))), np.inf, 2)
    with pytest.raises(ResourceCapError):
        betti_at(big, 0, 1, 0)


def rng_points(n):
    return np.random.default_rng(n).normal(size=(n, 2))


def grid(f):
    v = np.unique(f.order_value)
    q = np.unique(np.quantile(v, np.linspace(0, 1, 5), method="nearest"))
    return q


def check_against_oracle(f):
    d1 = persistence_diagram(f, clearing=True)
    d2 = persistence_diagram(f, clearing=False)
    assert d1 == d2
    q = grid(f)
    for k in range(f.maxdim + 1):
        for s in q:
            for t in q:
                if s <= t:
                    assert diagram_betti(d1, s, t, k) == betti_at(f, s, t, k), (k, s, t)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_filtrations_against_rank_oracle(seed):
    check_against_oracle(random_filtration(np.random.default_rng(seed)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_rips_against_rank_oracle(seed):
    check_against_oracle(build_rips(random_rips_input(np.random.default_rng(seed)), np.inf, 2))


def test_distinct_lows_and_disjoint_indices():
    rng = np.random.default_rng(2)
    f = build_rips(euclidean_distance_matrix(PointCloud(rng.normal(size=(25, 3)))), np.inf, 3)
    for clearing in (True, False):
        p = reduce(boundary_matrix(f), clearing=clearing)
        lows = [b for b, _ in p.pairs]
        deaths = [d for _, d in p.pairs]
        assert len(set(lows)) == len(lows) and len(set(deaths)) == len(deaths)
        used = lows + deaths + list(p.essential)
        assert len(used) == len(set(used)) == len(f)
        assert all(b < d for b, d in p.pairs)


def test_dense_column_path():
    # a tiny density threshold pushes every working column into bitsets
    rng = np.random.default_rng(3)
    f = build_rips(euclidean_distance_matrix(PointCloud(rng.normal(size=(15, 2)))), np.inf, 3)
    m = boundary_matrix(f)
    assert reduce(m, dense_fraction=1e-9) == reduce(m) == reduce(m, clearing=False, dense_fraction=1e-9)


def permuted_diagram(f, rng):
    """Diagram computed in an order that shuffles each (value, dim) tie block."""
    entries = f.entries
    keys = [(v, len(s)) for s, v in entries]
    order = list(range(len(entries)))
    i = 0
    while i < len(order):
        j = i
        while j < len(order) and keys[j] == keys[i]:
            j += 1
        order[i:j] = rng.permutation(order[i:j]).tolist()
        i = j
    pos = {entries[o][0]: new for new, o in enumerate(order)}
    indptr, indices, dims = [0], [], []
    for o in order:
        s = entries[o][0]
        col = sorted(pos[s[:i] + s[i + 1 :]] for i in range(len(s))) if len(s) > 1 else []
        indices += col
        indptr.append(len(indices))
        dims.append(len(s) - 1)
    m = BoundaryMatrix(indptr=np.array(indptr), indices=np.array(indices, dtype=np.int64), dims=np.array(dims))
    out = []
    for clearing in (True, False):
        p = reduce(m, clearing=clearing)
        rows = [(dims[b], entries[order[b]][1], entries[order[d]][1]) for b, d in p.pairs]
        rows += [(dims[b], entries[order[b]][1], math.inf) for b in p.essential]
        out.append(PersistenceDiagram(rows))
    assert out[0] == out[1]
    return out[0]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_order_invariance_within_ties(seed):
    rng = np.random.default_rng(seed)
    f = random_filtration(rng)
    assert permuted_diagram(f, rng) == persistence_diagram(f)


def test_diagram_type():
    d = PersistenceDiagram([[1, 0.5, 0.5], [0, 0, math.inf], [0, 0.2, 0.3]])
    assert pts(d) == [(0, 0, math.inf), (0, 0.2, 0.3)]
    assert d.dims == [0]
    with pytest.raises(ValueError):
        PersistenceDiagram([[0, 1, 0.5]])
    with pytest.raises(ValueError):
        PersistenceDiagram([[0, math.inf, math.inf]])
    with pytest.raises(ValueError):
        PersistenceDiagram([[0.5, 0, 1]])
    for p in persistence_diagram(build_rips(random_rips_input(np.random.default_rng(5)), np.inf, 2)).points:
        assert p[1] < p[2]
