"""Bottleneck distance between persistence diagrams and the stability check.

Points at infinity are matched among themselves by birth (sorted order is
optimal on a line); when the counts differ the distance is ``inf``.  The
finite parts are compared exactly: binary search over the sorted set of
candidate costs with a bipartite perfect-matching test at each candidate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching
from scipy.spatial import cKDTree

from .errors import DataError, ResourceCapError
from .metric import PointCloud, hausdorff_distance
from .persistence import INF, PersistenceDiagram, persistence_diagram

BRUTE_FORCE_CAP = 7


def diagonal_distance(p) -> float:
    """L-infinity distance from (birth, death) to the diagonal."""
    birth, death = float(p[0]), float(p[1])
    if not np.isfinite(death):
        raise DataError("a point with infinite death cannot be matched to the diagonal")
    return (death - birth) / 2


def linf(p, q) -> float:
    pb, pd, qb, qd = float(p[0]), float(p[1]), float(q[0]), float(q[1])
    if np.isinf(pd) or np.isinf(qd):
        if np.isinf(pd) and np.isinf(qd):
            return abs(pb - qb)
        return INF
    return max(abs(pb - qb), abs(pd - qd))


@dataclass(frozen=True)
class Matching:
    """Optimal matching realising the bottleneck distance.

    Each pair is ``(p, q)`` with points given as (birth, death) tuples; a
    point matched to the diagonal is paired with its projection
    ((b + d) / 2, (b + d) / 2) and costs exactly (d - b) / 2.
    """

    pairs: Tuple[Tuple[Tuple[float, float], Tuple[float, float]], ...]
    cost: float


def _split(d: PersistenceDiagram, dim: Optional[int]):
    if dim is None:
        dims = d.dims
        if len(dims) > 1:
            raise DataError(f"diagram mixes homology dimensions {dims}; pass dim=")
        dim = dims[0] if dims else 0
    p = d.in_dim(dim)
    fin = np.isfinite(p[:, 1])
    return p[fin], np.sort(p[~fin, 0])


def _dims_check(d1, d2, dim):
    if dim is None:
        dims = sorted(set(d1.dims) | set(d2.dims))
        if len(dims) > 1:
            raise DataError(f"diagrams mix homology dimensions {dims}; pass dim=")


def _candidate_pairs(A, B, diag_a, diag_b):
    """Pairs (i, j) with linf(A_i, B_j) < max(diag_a[i], diag_b[j]).

    Only such pairs can ever be useful: at a threshold t an edge matters
    only if one endpoint cannot go to the diagonal (its diagonal distance
    exceeds t).
    """
    if len(A) == 0 or len(B) == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0)
    ii, jj = [], []
    tree_b = cKDTree(B)
    for i, js in enumerate(tree_b.query_ball_point(A, diag_a, p=np.inf)):
        ii.extend([i] * len(js))
        jj.extend(js)
    tree_a = cKDTree(A)
    for j, is_ in enumerate(tree_a.query_ball_point(B, diag_b, p=np.inf)):
        ii.extend(is_)
        jj.extend([j] * len(is_))
    if not ii:
        return np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0)
    key = np.unique(np.array(ii, dtype=np.int64) * len(B) + np.array(jj, dtype=np.int64))
    i, j = key // len(B), key % len(B)
    cost = np.maximum(np.abs(A[i, 0] - B[j, 0]), np.abs(A[i, 1] - B[j, 1]))
    return i, j, cost


def _useful_edges(t, diag_a, diag_b, pi, pj, pc):
    heavy_a = diag_a > t
    heavy_b = diag_b > t
    use = (pc <= t) & (heavy_a[pi] | heavy_b[pj])
    return heavy_a, heavy_b, pi[use], pj[use]


def _covers(rows, cols, heavy_rows, n_cols) -> bool:
    """Whether some matching of the edge list covers every heavy row."""
    h = np.flatnonzero(heavy_rows)
    if len(h) == 0:
        return True
    keep = heavy_rows[rows]
    r = np.full(len(heavy_rows), -1)
    r[h] = np.arange(len(h))
    rows, cols = r[rows[keep]], cols[keep]
    if len(np.unique(rows)) < len(h):
        return False
    g = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(h), n_cols))
    return bool(np.all(maximum_bipartite_matching(g, perm_type="column") >= 0))


def _feasible(t, diag_a, diag_b, pi, pj, pc) -> bool:
    # A perfect matching of the diagonal-completed graph exists iff some
    # matching of the useful point-point edges covers every heavy point
    # (diagonal distance > t) of both diagrams.  By the Mendelsohn-Dulmage
    # theorem this splits into one covering test per side.
    heavy_a, heavy_b, ei, ej = _useful_edges(t, diag_a, diag_b, pi, pj, pc)
    return _covers(ei, ej, heavy_a, len(diag_b)) and _covers(ej, ei, heavy_b, len(diag_a))


def _matching_at(t, diag_a, diag_b, pi, pj, pc):
    """Point-point pairs of an optimal matching at a feasible threshold.

    Built on the diagonal-completed graph restricted to heavy points and
    light points that touch a useful edge; light points that touch none
    go to the diagonal.
    """
    heavy_a, heavy_b, ei, ej = _useful_edges(t, diag_a, diag_b, pi, pj, pc)
    keep_a = heavy_a.copy()
    keep_a[ei] = True
    keep_b = heavy_b.copy()
    keep_b[ej] = True
    ia = np.flatnonzero(keep_a)
    ib = np.flatnonzero(keep_b)
    na, nb = len(ia), len(ib)
    if na + nb == 0:
        return []
    ra = np.full(len(diag_a), -1)
    ra[ia] = np.arange(na)
    rb = np.full(len(diag_b), -1)
    rb[ib] = np.arange(nb)
    # left: A' then diagonal copies of B'; right: B' then copies of A'
    light_a = np.flatnonzero(~heavy_a[ia])
    light_b = np.flatnonzero(~heavy_b[ib])
    gb, ga = np.meshgrid(np.arange(nb), np.arange(na), indexing="ij")
    rows = np.concatenate([ra[ei], light_a, na + light_b, na + gb.ravel()])
    cols = np.concatenate([rb[ej], nb + light_a, light_b, nb + ga.ravel()])
    size = na + nb
    g = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    row_of = maximum_bipartite_matching(g, perm_type="row")
    if np.any(row_of < 0):
        raise AssertionError("threshold is not feasible")
    return [(int(ia[row_of[c]]), int(ib[c])) for c in range(nb) if row_of[c] < na]


def _finite_bottleneck(A, B, want_matching=False):
    diag_a = (A[:, 1] - A[:, 0]) / 2 if len(A) else np.empty(0)
    diag_b = (B[:, 1] - B[:, 0]) / 2 if len(B) else np.empty(0)
    if len(A) + len(B) == 0:
        return (0.0, []) if want_matching else 0.0
    pi, pj, pc = _candidate_pairs(A, B, diag_a, diag_b)
    cands = np.unique(np.concatenate([diag_a, diag_b, pc]))
    lo, hi = 0, len(cands) - 1
    # the largest candidate (every point to the diagonal) is feasible
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(cands[mid], diag_a, diag_b, pi, pj, pc):
            hi = mid
        else:
            lo = mid + 1
    best = float(cands[lo])
    if not want_matching:
        return best
    A, B = A.tolist(), B.tolist()
    pairs = []
    matched_a, matched_b = set(), set()
    for a, b in _matching_at(best, diag_a, diag_b, pi, pj, pc):
        pairs.append((tuple(A[a]), tuple(B[b])))
        matched_a.add(a)
        matched_b.add(b)
    for a in range(len(A)):
        if a not in matched_a:
            m = (A[a][0] + A[a][1]) / 2
            pairs.append((tuple(A[a]), (m, m)))
    for b in range(len(B)):
        if b not in matched_b:
            m = (B[b][0] + B[b][1]) / 2
            pairs.append(((m, m), tuple(B[b])))
    return best, pairs


def _essential_cost(ea, eb) -> float:
    if len(ea) != len(eb):
        return INF
    if len(ea) == 0:
        return 0.0
    return float(np.max(np.abs(ea - eb)))


def bottleneck_matching(d1: PersistenceDiagram, d2: PersistenceDiagram, dim: Optional[int] = None) -> Matching:
    _dims_check(d1, d2, dim)
    A, ea = _split(d1, dim)
    B, eb = _split(d2, dim)
    ess = _essential_cost(ea, eb)
    fin, pairs = _finite_bottleneck(A, B, want_matching=True)
    if np.isfinite(ess):
        pairs = pairs + [((float(x), INF), (float(y), INF)) for x, y in zip(ea, eb)]
    return Matching(pairs=tuple(pairs), cost=max(fin, ess))


def bottleneck_distance(d1: PersistenceDiagram, d2: PersistenceDiagram, dim: Optional[int] = None) -> float:
    """Exact bottleneck distance in homology dimension ``dim``.

    ``dim`` may be omitted when both diagrams live in a single dimension.
    """
    _dims_check(d1, d2, dim)
    A, ea = _split(d1, dim)
    B, eb = _split(d2, dim)
    ess = _essential_cost(ea, eb)
    if not np.isfinite(ess):
        return INF
    return max(ess, _finite_bottleneck(A, B))


def brute_force_bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram, dim: Optional[int] = None) -> float:
    """Bottleneck distance by enumerating every partial matching.

    Test oracle; refuses diagrams with more than ``BRUTE_FORCE_CAP`` points
    per side.
    """
    _dims_check(d1, d2, dim)
    if dim is None:
        dims = sorted(set(d1.dims) | set(d2.dims))
        dim = dims[0] if dims else 0
    P = [tuple(p) for p in d1.in_dim(dim).tolist()]
    Q = [tuple(q) for q in d2.in_dim(dim).tolist()]
    if len(P) > BRUTE_FORCE_CAP or len(Q) > BRUTE_FORCE_CAP:
        raise ResourceCapError(f"brute force limited to {BRUTE_FORCE_CAP} points per diagram")

    def to_diag(p):
        return INF if np.isinf(p[1]) else (p[1] - p[0]) / 2

    best = [INF]
    used = [False] * len(Q)

    def rec(i, cost):
        if cost >= best[0]:
            return
        if i == len(P):
            rest = [to_diag(Q[j]) for j in range(len(Q)) if not used[j]]
            best[0] = min(best[0], max([cost] + rest))
            return
        rec(i + 1, max(cost, to_diag(P[i])))
        for j in range(len(Q)):
            if not used[j]:
                used[j] = True
                rec(i + 1, max(cost, linf(P[i], Q[j])))
                used[j] = False

    rec(0, 0.0)
    return best[0]


def stability_gap(X: PointCloud, Xp: PointCloud, builder, dim: int):
    """Return ``(d_b, 2 d_H)`` for the diagrams of two point clouds."""
    d1 = persistence_diagram(builder(X))
    d2 = persistence_diagram(builder(Xp))
    return bottleneck_distance(d1, d2, dim), 2 * hausdorff_distance(X, Xp)
