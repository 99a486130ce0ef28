import itertools

import numpy as np
import pytest

from topostat.errors import DataError, ResourceCapError
from topostat.meb import circumball, minimal_enclosing_ball


def subset_oracle(P):
    # the minimal ball is the smallest circumball of at most D + 1 points
    # that contains everything
    best = np.inf
    for k in range(1, P.shape[1] + 2):
        for sub in itertools.combinations(range(len(P)), k):
            c, r = circumball(P[list(sub)])
            if np.all(np.linalg.norm(P - c, axis=1) <= r * (1 + 1e-9) + 1e-12):
                best = min(best, r)
    return best


def test_trivial_cases():
    c, r = minimal_enclosing_ball([[1.0, 2.0]])
    assert r == 0 and np.array_equal(c, [1.0, 2.0])
    c, r = minimal_enclosing_ball([[0.0, 0.0], [2.0, 0.0]])
    assert r == 1.0 and np.allclose(c, [1, 0])
    with pytest.raises(DataError):
        minimal_enclosing_ball(np.empty((0, 2)))
    with pytest.raises(ResourceCapError):
        minimal_enclosing_ball(np.zeros((3, 20)))


def test_obtuse_triangle():
    _, r = minimal_enclosing_ball([[0, 0], [4, 0], [1, 0.5]])
    assert abs(r - 2.0) < 1e-12


def test_matches_subset_oracle():
    rng = np.random.default_rng(0)
    for _ in range(30):
        P = rng.normal(size=(rng.integers(2, 9), rng.integers(1, 4)))
        c, r = minimal_enclosing_ball(P)
        assert np.all(np.linalg.norm(P - c, axis=1) <= r + 1e-9)
        assert abs(r - subset_oracle(P)) <= 1e-9


def test_thirty_points_in_3d():
    rng = np.random.default_rng(1)
    P = rng.normal(size=(30, 3))
    c, r = minimal_enclosing_ball(P)
    assert np.all(np.linalg.norm(P - c, axis=1) <= r + 1e-9)
    # iterative refinement oracle (Badoiu-Clarkson): converges to the optimum from above
    x = P.mean(axis=0)
    for i in range(1, 200_000):
        far = P[np.argmax(np.linalg.norm(P - x, axis=1))]
        x = x + (far - x) / (i + 1)
    approx = np.linalg.norm(P - x, axis=1).max()
    assert r <= approx + 1e-9
    assert approx - r < 1e-2
    assert abs(r - subset_oracle(P[np.argsort(-np.linalg.norm(P - c, axis=1))[:8]])) <= 1e-9


def test_duplicates():
    _, r = minimal_enclosing_ball([[1.0, 1.0]] * 4)
    assert r == 0
