import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import Delaunay

from topostat.delaunay import _incircle_terms_exact, delaunay_triangles, orient
from topostat.errors import DataError


def canon(tri):
    return sorted(tuple(sorted(t)) for t in np.asarray(tri).tolist())


def empty_circle(points, tri):
    # no point strictly inside any circumcircle, decided exactly
    P = [tuple(p) for p in points]
    for a, b, c in tri:
        for i, q in enumerate(P):
            if i not in (a, b, c):
                assert _incircle_terms_exact(P[a], P[b], P[c], q)[0] <= 0


@pytest.mark.parametrize("n", [3, 4, 10, 100, 1000])
def test_matches_scipy(n):
    pts = np.random.default_rng(n).uniform(size=(n, 2))
    assert canon(delaunay_triangles(pts)) == canon(Delaunay(pts).simplices)


def test_orientation_is_ccw():
    pts = np.random.default_rng(0).uniform(size=(200, 2))
    for a, b, c in delaunay_triangles(pts):
        assert orient(pts[a], pts[b], pts[c]) > 0


def test_small_cases():
    assert delaunay_triangles([[0, 0], [1, 0]]).shape == (0, 3)
    assert delaunay_triangles([[0, 0], [1, 1], [2, 2], [3, 3]]).shape == (0, 3)
    with pytest.raises(DataError):
        delaunay_triangles([[0, 0], [1, 0], [0, 1], [1, 0]])


def test_unit_square_tie_break():
    sq = [[0, 0], [1, 0], [1, 1], [0, 1]]
    assert canon(delaunay_triangles(sq)) == [(0, 1, 3), (1, 2, 3)]


def test_grid_cocircular():
    g = np.array([(x, y) for x in range(5) for y in range(5)], float)
    tri = delaunay_triangles(g)
    assert len(tri) == 32
    empty_circle(g, tri)
    # the result does not depend on the insertion order of equal inputs
    perm = np.random.default_rng(1).permutation(len(g))
    tri2 = delaunay_triangles(g[perm])
    assert len(tri2) == 32
    empty_circle(g[perm], tri2)


def test_collinear_plus_one():
    pts = [[0, 0], [1, 0], [2, 0], [3, 0], [1.5, 1]]
    tri = delaunay_triangles(pts)
    assert len(tri) == 3
    empty_circle(np.array(pts, float), tri)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.integers(3, 60))
def test_empty_circumcircles_on_lattice(seed, n):
    # integer lattice points: many exact ties
    rng = np.random.default_rng(seed)
    pts = np.unique(rng.integers(0, 6, size=(n, 2)), axis=0).astype(float)
    tri = delaunay_triangles(pts)
    if len(tri) == 0:
        return
    empty_circle(pts, tri)
    # triangles tile the convex hull: total area equals the hull area
    from scipy.spatial import ConvexHull

    area = sum(abs(np.linalg.det(np.array([pts[b] - pts[a], pts[c] - pts[a]]))) / 2 for a, b, c in tri)
    assert abs(area - ConvexHull(pts).volume) < 1e-9
