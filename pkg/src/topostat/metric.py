"""Finite metric spaces, Hausdorff distance and packing/covering diagnostics.

A sample is either a :class:`PointCloud` (coordinates in some R^D) or a
:class:`DistanceMatrix` (an abstract finite metric space).  Everything
downstream only needs pairwise distances, so a point cloud can always be
turned into a distance matrix with :func:`euclidean_distance_matrix`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DataError

# exhaustive triangle-inequality validation up to this many points
EXHAUSTIVE_TRIANGLE_LIMIT = 200


def _frozen(a):
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PointCloud:
    """A finite set of points in R^D, one row per point."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DataError(f"point cloud must be a non-empty (n, D) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DataError("point cloud contains non-finite coordinates")
        object.__setattr__(self, "points", _frozen(pts))

    @property
    def ambient_dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def __eq__(self, other):
        return isinstance(other, PointCloud) and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash(self.points.tobytes())


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric matrix of pairwise distances with zero diagonal.

    Construction checks shape, symmetry, non-negativity and the zero
    diagonal.  The triangle inequality is O(n^3) and is only checked by
    :meth:`validate`.
    """

    entries: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.entries, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
            raise DataError(f"distance matrix must be square and non-empty, got shape {d.shape}")
        if not np.all(np.isfinite(d)):
            raise DataError("distance matrix contains non-finite entries")
        if np.any(d < 0):
            raise DataError("distance matrix contains negative entries")
        if np.any(np.diag(d) != 0):
            raise DataError("distance matrix has a nonzero diagonal")
        if not np.array_equal(d, d.T):
            raise DataError("distance matrix is not symmetric")
        object.__setattr__(self, "entries", _frozen(d))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, DistanceMatrix) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def diameter(self) -> float:
        return float(self.entries.max())

    def validate(self, rng=None) -> None:
        """Check the triangle inequality.

        Exhaustive up to ``EXHAUSTIVE_TRIANGLE_LIMIT`` points, otherwise
        ``10 * n`` random triples are checked.  Raises :class:`DataError`
        on the first violation found.
        """
        d = self.entries
        n = self.n
        if n <= EXHAUSTIVE_TRIANGLE_LIMIT:
            for k in range(n):
                # d[i, j] <= d[i, k] + d[k, j] for all i, j
                bad = d > d[:, k, None] + d[None, k, :]
                if bad.any():
                    i, j = np.argwhere(bad)[0]
                    raise DataError(f"triangle inequality fails for ({i}, {j}) via {k}")
            return
        rng = np.random.default_rng(rng)
        i, j, k = rng.integers(0, n, size=(3, 10 * n))
        bad = d[i, j] > d[i, k] + d[k, j]
        if bad.any():
            t = np.flatnonzero(bad)[0]
            raise DataError(f"triangle inequality fails for ({i[t]}, {j[t]}) via {k[t]}")

    def submatrix(self, indices) -> "DistanceMatrix":
        idx = np.asarray(indices, dtype=int)
        return DistanceMatrix(self.entries[np.ix_(idx, idx)])


def euclidean_distance_matrix(cloud: PointCloud) -> DistanceMatrix:
    pts = cloud.points
    d = cdist(pts, pts)
    # cdist is symmetric up to rounding only in principle; force it
    d = np.triu(d, 1)
    return DistanceMatrix(d + d.T)


def as_distance_matrix(space: Union[PointCloud, DistanceMatrix]) -> DistanceMatrix:
    if isinstance(space, DistanceMatrix):
        return space
    if isinstance(space, PointCloud):
        return euclidean_distance_matrix(space)
    raise DataError(f"expected PointCloud or DistanceMatrix, got {type(space).__name__}")


@dataclass(frozen=True, eq=False)
class IndexSet:
    """A subset of the points of a shared distance matrix."""

    dm: DistanceMatrix
    indices: np.ndarray = field(default=None)

    def __post_init__(self):
        idx = np.arange(self.dm.n) if self.indices is None else np.unique(np.asarray(self.indices, dtype=int))
        if idx.size == 0:
            raise DataError("index set is empty")
        if idx.min() < 0 or idx.max() >= self.dm.n:
            raise DataError("index set refers to points outside the distance matrix")
        object.__setattr__(self, "indices", idx)


DistanceContext = Union[PointCloud, IndexSet]


def _cross_distances(A: DistanceContext, B: DistanceContext) -> np.ndarray:
    if isinstance(A, PointCloud) and isinstance(B, PointCloud):
        if A.ambient_dim != B.ambient_dim:
            raise DataError(f"point clouds live in R^{A.ambient_dim} and R^{B.ambient_dim}")
        return cdist(A.points, B.points)
    if isinstance(A, IndexSet) and isinstance(B, IndexSet):
        if A.dm is not B.dm and A.dm != B.dm:
            raise DataError("index sets belong to different distance matrices")
        return A.dm.entries[np.ix_(A.indices, B.indices)]
    raise DataError(f"cannot compare {type(A).__name__} with {type(B).__name__}")


def hausdorff_distance(A: DistanceContext, B: DistanceContext) -> float:
    """Hausdorff distance between two finite sets in a common metric."""
    d = _cross_distances(A, B)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def directed_hausdorff(A: DistanceContext, B: DistanceContext) -> float:
    """sup over a in A of d(a, B)."""
    return float(_cross_distances(A, B).min(axis=1).max())


def greedy_packing_number(dm: DistanceMatrix, r: float) -> int:
    """Size of a first-fit maximal r-packing.

    Two balls B(x, r), B(y, r) count as disjoint when d(x, y) > 2r (open
    balls).  The result is a lower bound on the packing number.
    """
    if not r > 0:
        raise DataError("packing radius must be positive")
    d = dm.entries
    chosen = []
    for i in range(dm.n):
        if not chosen or np.all(d[i, chosen] > 2 * r):
            chosen.append(i)
    return len(chosen)


def greedy_covering_number(dm: DistanceMatrix, r: float) -> int:
    """Number of centers picked by farthest-point sampling until every
    point lies within distance r (closed) of a center.

    An upper bound on the covering number.  Successive centers are more
    than r apart, so the chosen set is also an r/2-packing.
    """
    if not r > 0:
        raise DataError("covering radius must be positive")
    d = dm.entries
    dist = d[0].copy()
    count = 1
    while True:
        far = int(np.argmax(dist))
        if dist[far] <= r:
            return count
        count += 1
        np.minimum(dist, d[far], out=dist)


class Violation(NamedTuple):
    index: int
    radius: float
    mass: float
    required: float


@dataclass(frozen=True)
class StandardAssumptionReport:
    a: float
    b: float
    violations: tuple

    @property
    def passed(self) -> bool:
        return not self.violations


def check_standard_assumption(
    sample: DistanceMatrix,
    weights: Sequence[float],
    a: float,
    b: float,
    radius_grid: Sequence[float],
) -> StandardAssumptionReport:
    """Check mu(B(x, r)) >= min(1, a r^b) for the weighted empirical measure.

    Balls are open.  Every support point (positive weight) is tested at
    every radius of the grid; all failures are recorded.
    """
    grid = np.asarray(radius_grid, dtype=float).ravel()
    if grid.size == 0:
        raise DataError("radius grid is empty")
    if not (a > 0 and b > 0):
        raise DataError("a and b must be positive")
    w = np.asarray(weights, dtype=float)
    if w.shape != (sample.n,) or np.any(w < 0) or not np.isclose(w.sum(), 1.0, rtol=0, atol=1e-9):
        raise DataError("weights must be a nonnegative vector of length n summing to 1")
    d = sample.entries
    violations = []
    for r in grid:
        required = min(1.0, a * r ** b)
        mass = (d < r) @ w
        for i in np.flatnonzero((mass < required) & (w > 0)):
            violations.append(Violation(int(i), float(r), float(mass[i]), float(required)))
    return StandardAssumptionReport(a=a, b=b, violations=tuple(violations))
