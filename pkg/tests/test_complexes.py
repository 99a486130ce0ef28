import itertools
import math

import numpy as np
import pytest

from topostat.complexes import (
    Builder,
    Filtration,
    build_alpha_2d,
    build_cech,
    build_rips,
)
from topostat.errors import DataError, ResourceCapError
from topostat.meb import minimal_enclosing_ball
from topostat.metric import DistanceMatrix, PointCloud, euclidean_distance_matrix

EQ = PointCloud([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])


def as_dict(f):
    return {tuple(int(v) for v in s): val for s, val in f}


def check_monotone(f):
    d = as_dict(f)
    for s, v in d.items():
        for i in range(len(s) if len(s) > 1 else 0):
            assert d[s[:i] + s[i + 1 :]] <= v
    keys = [(v, len(s), s) for s, v in f]
    assert keys == sorted(keys)


def test_rips_equilateral():
    f = build_rips(euclidean_distance_matrix(EQ), 2.0, 2)
    d = as_dict(f)
    assert len(d) == 7
    assert [d[(i,)] for i in range(3)] == [0, 0, 0]
    assert all(abs(d[e] - 1) < 1e-12 for e in [(0, 1), (0, 2), (1, 2)])
    assert abs(d[(0, 1, 2)] - 1) < 1e-12


def test_single_point():
    for b in (Builder("rips", 1.0, 2), Builder("cech", 1.0, 2), Builder("alpha2d")):
        f = b(PointCloud([[0.0, 0.0]]))
        assert f.entries == [((0,), 0.0)]


def test_rips_subset_oracle():
    rng = np.random.default_rng(0)
    for _ in range(10):
        X = rng.normal(size=(8, 3))
        dm = euclidean_distance_matrix(PointCloud(X))
        for thr in (np.inf, 1.5):
            f = build_rips(dm, thr, 2)
            oracle = {}
            for k in range(1, 4):
                for s in itertools.combinations(range(8), k):
                    v = max([0.0] + [dm.entries[i, j] for i, j in itertools.combinations(s, 2)])
                    if v <= thr:
                        oracle[s] = v
            assert as_dict(f) == oracle
            check_monotone(f)


def test_rips_validation():
    dm = euclidean_distance_matrix(EQ)
    with pytest.raises(DataError):
        build_rips(dm, -1, 1)
    with pytest.raises(DataError):
        build_rips(dm, 1, -1)
    with pytest.raises(ResourceCapError) as exc:
        build_rips(euclidean_distance_matrix(PointCloud(np.random.default_rng(1).normal(size=(30, 2)))), np.inf, 3, max_simplices=100)
    assert "estimate" in str(exc.value) or exc.value.estimate > 100


def test_cap_env_var(monkeypatch):
    monkeypatch.setenv("TOPOSTAT_MAX_SIMPLICES", "5")
    with pytest.raises(ResourceCapError):
        build_rips(euclidean_distance_matrix(EQ), np.inf, 2)


def test_cech_examples():
    d = as_dict(build_cech(PointCloud([[0.0], [1.0]]), np.inf, 1))
    assert d[(0, 1)] == 0.5
    d = as_dict(build_cech(EQ, np.inf, 2))
    assert all(abs(d[e] - 0.5) < 1e-12 for e in [(0, 1), (0, 2), (1, 2)])
    assert abs(d[(0, 1, 2)] - 1 / math.sqrt(3)) < 1e-12
    d = as_dict(build_cech(PointCloud([[0, 0], [4, 0], [1, 0.5]]), np.inf, 2))
    assert abs(d[(0, 1, 2)] - 2.0) < 1e-12


def test_cech_duplicates_and_threshold():
    d = as_dict(build_cech(PointCloud([[1.0, 1.0], [1.0, 1.0], [2.0, 1.0]]), 0.4, 2))
    assert d[(0, 1)] == 0 and (0, 2) not in d


def test_cech_matches_meb():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(8, 3))
    f = build_cech(PointCloud(X), np.inf, 3)
    check_monotone(f)
    for s, v in f:
        if len(s) > 1:
            assert abs(v - minimal_enclosing_ball(X[list(s)])[1]) <= 1e-9


def test_rips_needs_matrix_or_cloud():
    dm = DistanceMatrix([[0, 2], [2, 0]])
    assert as_dict(build_rips(dm, np.inf, 1))[(0, 1)] == 2
    with pytest.raises(DataError):
        build_cech(dm, np.inf, 1)


def test_alpha_square():
    d = as_dict(build_alpha_2d(PointCloud([[0, 0], [1, 0], [1, 1], [0, 1]])))
    assert sum(len(s) == 1 for s in d) == 4
    boundary = [(0, 1), (1, 2), (2, 3), (0, 3)]
    assert all(d[e] == 0.5 for e in boundary)
    diag = [e for e in d if len(e) == 2 and e not in boundary]
    tris = [t for t in d if len(t) == 3]
    assert len(diag) == 1 and len(tris) == 2
    r = math.sqrt(2) / 2
    assert all(abs(d[s] - r) < 1e-12 for s in diag + tris)


def test_alpha_equilateral():
    d = as_dict(build_alpha_2d(EQ))
    assert all(abs(d[e] - 0.5) < 1e-12 for e in [(0, 1), (0, 2), (1, 2)])
    assert abs(d[(0, 1, 2)] - 1 / math.sqrt(3)) < 1e-12


def test_alpha_non_gabriel_edge():
    # the long edge of an obtuse triangle is not Gabriel: it enters with the triangle
    d = as_dict(build_alpha_2d(PointCloud([[0, 0], [4, 0], [2, 0.5]])))
    R = d[(0, 1, 2)]
    assert d[(0, 1)] == R and R > 2


def test_alpha_collinear_and_repeated():
    d = as_dict(build_alpha_2d(PointCloud([[2, 0], [0, 0], [1, 0]])))
    assert d == {(0,): 0, (1,): 0, (2,): 0, (1, 2): 0.5, (0, 2): 0.5}
    with pytest.raises(DataError):
        build_alpha_2d(PointCloud([[0, 0], [0, 0], [1, 1]]))
    with pytest.raises(DataError):
        build_alpha_2d(PointCloud([[0, 0, 0]]))


def test_alpha_sub_cech():
    rng = np.random.default_rng(3)
    X = rng.uniform(size=(40, 2))
    alpha = as_dict(build_alpha_2d(PointCloud(X)))
    cech = as_dict(build_cech(PointCloud(X), np.inf, 2))
    check_monotone(build_alpha_2d(PointCloud(X)))
    for s, v in alpha.items():
        assert cech[s] <= v + 1e-12


def test_interleaving():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(9, 3))
    cech = as_dict(build_cech(PointCloud(X), np.inf, 3))
    rips = as_dict(build_rips(euclidean_distance_matrix(PointCloud(X)), np.inf, 3))
    for s in cech:
        assert cech[s] <= rips[s] + 1e-9 and rips[s] <= 2 * cech[s] + 1e-9


def test_from_entries_validation():
    with pytest.raises(DataError):
        Filtration.from_entries([((0, 1), 1.0)])
    with pytest.raises(DataError):
        Filtration.from_entries([((0,), 2.0), ((1,), 0.0), ((0, 1), 1.0)])
    with pytest.raises(DataError):
        Filtration.from_entries([((1, 0), 1.0)])
    f = Filtration.from_entries([((1,), 0.0), ((0,), 0.0), ((0, 1), 1.0)])
    assert f.entries == [((0,), 0.0), ((1,), 0.0), ((0, 1), 1.0)]


def test_builder():
    b = Builder("rips", 1.2, 2)
    assert b == Builder("rips", 1.2, 2) and "rips" in repr(b)
    with pytest.raises(DataError):
        Builder("witness")
