import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topostat.errors import DataError
from topostat.metric import (
    DistanceMatrix,
    IndexSet,
    PointCloud,
    check_standard_assumption,
    directed_hausdorff,
    euclidean_distance_matrix,
    greedy_covering_number,
    greedy_packing_number,
    hausdorff_distance,
)


def line(xs):
    return euclidean_distance_matrix(PointCloud(np.asarray(xs, float).reshape(-1, 1)))


def exact_packing(dm, r):
    n = dm.n
    for size in range(n, 0, -1):
        for sub in itertools.combinations(range(n), size):
            if all(dm.entries[i, j] > 2 * r for i, j in itertools.combinations(sub, 2)):
                return size
    return 0


def exact_covering(dm, r):
    n = dm.n
    for size in range(1, n + 1):
        for sub in itertools.combinations(range(n), size):
            if np.all(dm.entries[:, list(sub)].min(axis=1) <= r):
                return size


def test_three_four_five():
    dm = euclidean_distance_matrix(PointCloud([[0, 0], [3, 4]]))
    assert dm.entries[0, 1] == 5.0 and dm.n == 2


def test_single_point_matrix():
    dm = euclidean_distance_matrix(PointCloud([[1.0, 2.0]]))
    assert dm.entries.shape == (1, 1) and dm.entries[0, 0] == 0


def test_matches_double_loop():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(10, 3))
    dm = euclidean_distance_matrix(PointCloud(X))
    for i in range(10):
        for j in range(10):
            ref = sum((X[i, c] - X[j, c]) ** 2 for c in range(3)) ** 0.5
            assert abs(dm.entries[i, j] - ref) <= 1e-12


def test_point_cloud_validation():
    with pytest.raises(DataError):
        PointCloud(np.empty((0, 2)))
    with pytest.raises(DataError):
        PointCloud([[0.0, np.nan]])


def test_distance_matrix_validation():
    with pytest.raises(DataError):
        DistanceMatrix([[0, 1], [2, 0]])
    with pytest.raises(DataError):
        DistanceMatrix([[1, 0], [0, 0]])
    with pytest.raises(DataError):
        DistanceMatrix([[0, 5, 1], [5, 0, 1], [1, 1, 0]]).validate()
    euclidean_distance_matrix(PointCloud(np.random.default_rng(1).normal(size=(50, 4)))).validate()


def test_sampled_triangle_check_above_limit():
    rng = np.random.default_rng(2)
    dm = euclidean_distance_matrix(PointCloud(rng.normal(size=(250, 2))))
    dm.validate(rng=0)
    bad = dm.entries.copy()
    bad[bad > 0] = 1.0
    bad[0, 1:126] = bad[1:126, 0] = 3.0  # far from half the points, 1 from the rest
    with pytest.raises(DataError):
        DistanceMatrix(bad).validate(rng=0)


def test_hausdorff_examples():
    assert hausdorff_distance(PointCloud([[0.0]]), PointCloud([[1.0]])) == 1.0
    X = PointCloud(np.random.default_rng(3).normal(size=(7, 2)))
    assert hausdorff_distance(X, X) == 0.0


def test_hausdorff_brute_force():
    rng = np.random.default_rng(4)
    A, B = rng.normal(size=(20, 2)), rng.normal(size=(20, 2))

    def d(p, q):
        return float(np.sqrt(((p - q) ** 2).sum()))

    ab = max(min(d(a, b) for b in B) for a in A)
    ba = max(min(d(a, b) for a in A) for b in B)
    assert abs(hausdorff_distance(PointCloud(A), PointCloud(B)) - max(ab, ba)) <= 1e-12
    assert abs(directed_hausdorff(PointCloud(A), PointCloud(B)) - ab) <= 1e-12


def test_hausdorff_index_sets():
    dm = line([0, 1, 3, 7])
    assert hausdorff_distance(IndexSet(dm, [0, 1]), IndexSet(dm, [2])) == 3.0
    with pytest.raises(DataError):
        hausdorff_distance(IndexSet(dm, [0]), IndexSet(line([0, 1]), [1]))
    with pytest.raises(DataError):
        hausdorff_distance(PointCloud([[0.0]]), PointCloud([[0.0, 1.0]]))
    with pytest.raises(DataError):
        hausdorff_distance(PointCloud([[0.0]]), IndexSet(dm, [0]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_hausdorff_metric_axioms(seed):
    rng = np.random.default_rng(seed)
    A, B, C = (PointCloud(rng.normal(size=(rng.integers(1, 8), 2))) for _ in range(3))
    ab, ba = hausdorff_distance(A, B), hausdorff_distance(B, A)
    assert ab == ba and ab >= 0
    assert hausdorff_distance(A, C) <= ab + hausdorff_distance(B, C) + 1e-12


def test_packing_examples():
    eleven = line(np.linspace(0, 1, 11))
    assert greedy_packing_number(eleven, 0.05) >= 5
    assert greedy_packing_number(line([0.0]), 3.0) == 1
    assert greedy_packing_number(line([0, 1]), 0.6) == 1


def test_covering_examples():
    eleven = line(np.linspace(0, 1, 11))
    assert greedy_covering_number(eleven, 0.5) <= 2
    assert greedy_covering_number(eleven, 1.0) == 1
    assert greedy_covering_number(line([0, 1, 2]), 0.4) == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.05, 0.6))
def test_greedy_against_exhaustive(seed, r):
    rng = np.random.default_rng(seed)
    dm = euclidean_distance_matrix(PointCloud(rng.uniform(0, 1, (rng.integers(1, 10), 2))))
    pk = greedy_packing_number(dm, r)
    cv = greedy_covering_number(dm, r)
    # greedy packing is a maximal packing: a lower bound on the optimum;
    # greedy covering covers: an upper bound on the optimum
    assert 1 <= pk <= exact_packing(dm, r)
    assert cv >= exact_covering(dm, r)
    # pk(2r) <= cov(2r) <= pk(r) for the exact quantities
    assert exact_packing(dm, 2 * r) <= exact_covering(dm, 2 * r) <= exact_packing(dm, r)
    # farthest-point centres are more than r apart
    assert cv <= exact_packing(dm, r / 2)


def test_standard_assumption():
    rng = np.random.default_rng(5)
    n = 1000
    dm = line(rng.uniform(0, 1, n))
    w = np.full(n, 1 / n)
    assert check_standard_assumption(dm, w, 0.5, 1, [0.05, 0.1, 0.2]).passed
    assert not check_standard_assumption(dm, w, 1e6, 1, [0.05]).passed
    atom = line([0.0])
    assert check_standard_assumption(atom, [1.0], 1.0, 2.0, [0.1, 1.0, 5.0]).passed
    with pytest.raises(DataError):
        check_standard_assumption(dm, w, 1, 1, [])
    with pytest.raises(DataError):
        check_standard_assumption(dm, np.ones(n), 1, 1, [0.1])
