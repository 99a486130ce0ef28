"""Filtered simplicial complexes: Vietoris-Rips, Cech and planar alpha.

Value conventions
-----------------
* Rips: a simplex enters at the largest pairwise distance of its vertices
  (an edge of length l enters at l, not l / 2).
* Cech: a simplex enters at the radius of the minimal enclosing ball of
  its vertices, so ``Rips(a) <= Cech(a) <= Rips(2a)`` holds value-wise.
* Alpha (2-D): radius convention as well, so values are comparable with
  Cech.

Every filtration is stored in the total order (value, dimension,
lexicographic vertices), which puts faces before cofaces.
"""

from __future__ import annotations

import os
from typing import Iterator, List, Sequence, Tuple, Union

import numpy as np

from .delaunay import delaunay_triangles
from .errors import DataError, ResourceCapError
from .meb import minimal_enclosing_ball
from .metric import DistanceMatrix, PointCloud, as_distance_matrix

DEFAULT_MAX_SIMPLICES = 50_000_000
CAP_ENV_VAR = "TOPOSTAT_MAX_SIMPLICES"

Simplex = Tuple[int, ...]


def simplex_cap(cap=None) -> int:
    if cap is not None:
        return int(cap)
    env = os.environ.get(CAP_ENV_VAR)
    return int(env) if env else DEFAULT_MAX_SIMPLICES


def _lookup(table: np.ndarray, queries: np.ndarray, n: int) -> np.ndarray:
    """Row index in ``table`` of every row of ``queries`` (-1 if absent)."""
    width = table.shape[1]
    if len(table) == 0:
        return np.full(len(queries), -1, dtype=np.int64)
    if float(n) ** width < 2.0 ** 62:
        weights = n ** np.arange(width - 1, -1, -1, dtype=np.int64)
        tkey = table @ weights
        qkey = queries @ weights
        sort = np.argsort(tkey, kind="stable")
        where = np.minimum(np.searchsorted(tkey[sort], qkey), len(table) - 1)
        idx = sort[where]
        return np.where(tkey[idx] == qkey, idx, -1)
    index = {tuple(r): i for i, r in enumerate(table.tolist())}
    return np.array([index.get(tuple(r), -1) for r in queries.tolist()], dtype=np.int64)


class Filtration:
    """A finite filtered simplicial complex.

    ``simplices[k]`` is an ``(m_k, k + 1)`` array of increasing vertex
    indices and ``values[k]`` the matching entry values.  The global order
    is available through :attr:`order_dim` / :attr:`order_local` and
    iteration yields ``(simplex, value)`` pairs in that order.
    """

    def __init__(self, simplices: Sequence[np.ndarray], values: Sequence[np.ndarray], validate: bool = False):
        if len(simplices) != len(values):
            raise DataError("simplices and values must have one entry per dimension")
        self.simplices: List[np.ndarray] = []
        self.values: List[np.ndarray] = []
        for k, (s, v) in enumerate(zip(simplices, values)):
            s = np.asarray(s, dtype=np.int64).reshape(-1, k + 1)
            v = np.asarray(v, dtype=float).ravel()
            if len(s) != len(v):
                raise DataError(f"dimension {k}: {len(s)} simplices but {len(v)} values")
            if len(s) and k and np.any(np.diff(s, axis=1) <= 0):
                raise DataError(f"dimension {k}: vertex lists must be strictly increasing")
            if np.any(np.isnan(v)) or np.any(v < 0):
                raise DataError(f"dimension {k}: values must be nonnegative")
            self.simplices.append(s)
            self.values.append(v)
        while self.simplices and len(self.simplices[-1]) == 0:
            self.simplices.pop()
            self.values.pop()
        self._sort()
        for s, v in zip(self.simplices, self.values):
            s.setflags(write=False)
            v.setflags(write=False)
        if validate:
            self.validate()

    def _sort(self):
        # reorder each dimension block by (value, lex), then merge blocks by
        # (value, dim); within a block the merged order is preserved
        for k in range(len(self.simplices)):
            s, v = self.simplices[k], self.values[k]
            order = np.lexsort(tuple(s[:, c] for c in range(k, -1, -1)) + (v,))
            self.simplices[k] = s[order]
            self.values[k] = v[order]
        dims = np.concatenate([np.full(len(v), k, dtype=np.int64) for k, v in enumerate(self.values)] or [np.empty(0, np.int64)])
        local = np.concatenate([np.arange(len(v), dtype=np.int64) for v in self.values] or [np.empty(0, np.int64)])
        vals = np.concatenate(self.values or [np.empty(0)])
        order = np.lexsort((local, dims, vals))
        self.order_dim = dims[order]
        self.order_local = local[order]
        self.order_value = vals[order]
        self.position = []
        for k in range(len(self.values)):
            pos = np.empty(len(self.values[k]), dtype=np.int64)
            pos[self.order_local[self.order_dim == k]] = np.flatnonzero(self.order_dim == k)
            self.position.append(pos)
        for a in (self.order_dim, self.order_local, self.order_value):
            a.setflags(write=False)

    @classmethod
    def from_entries(cls, entries, validate: bool = True) -> "Filtration":
        """Build from an iterable of ``(vertex sequence, value)`` pairs."""
        by_dim: dict = {}
        for verts, value in entries:
            verts = tuple(int(x) for x in verts)
            if len(verts) == 0:
                raise DataError("empty simplex")
            if tuple(sorted(set(verts))) != verts:
                raise DataError(f"simplex {verts} is not strictly increasing")
            by_dim.setdefault(len(verts) - 1, []).append((verts, float(value)))
        top = max(by_dim) + 1 if by_dim else 0
        simplices, values = [], []
        for k in range(top):
            items = by_dim.get(k, [])
            simplices.append(np.array([s for s, _ in items], dtype=np.int64).reshape(-1, k + 1))
            values.append(np.array([v for _, v in items], dtype=float))
        return cls(simplices, values, validate=validate)

    @property
    def maxdim(self) -> int:
        return len(self.simplices) - 1

    @property
    def n_vertices(self) -> int:
        return len(self.simplices[0]) if self.simplices else 0

    def __len__(self):
        return len(self.order_value)

    def dim(self, pos: int) -> int:
        return int(self.order_dim[pos])

    def value(self, pos: int) -> float:
        return float(self.order_value[pos])

    def simplex(self, pos: int) -> Simplex:
        k = self.order_dim[pos]
        return tuple(int(x) for x in self.simplices[k][self.order_local[pos]])

    def __iter__(self) -> Iterator[Tuple[Simplex, float]]:
        for pos in range(len(self)):
            yield self.simplex(pos), self.value(pos)

    @property
    def entries(self) -> List[Tuple[Simplex, float]]:
        return list(self)

    def __eq__(self, other):
        if not isinstance(other, Filtration) or len(self) != len(other):
            return False
        return self.entries == other.entries

    def facet_positions(self, k: int) -> np.ndarray:
        """``(m_k, k + 1)`` array: global positions of the facets of every
        k-simplex (facet i omits vertex i).  Raises if a facet is missing."""
        s = self.simplices[k]
        if k == 0:
            return np.empty((len(s), 0), dtype=np.int64)
        n = 1 + max(int(a.max()) for a in self.simplices[k - 1 : k + 1] if len(a))
        out = np.empty((len(s), k + 1), dtype=np.int64)
        for i in range(k + 1):
            facet = np.delete(s, i, axis=1)
            idx = _lookup(self.simplices[k - 1], facet, n)
            if np.any(idx < 0):
                j = int(np.flatnonzero(idx < 0)[0])
                raise DataError(
                    f"face {tuple(int(x) for x in facet[j])} of simplex {tuple(int(x) for x in s[j])} is missing"
                )
            out[:, i] = self.position[k - 1][idx]
        return out

    def validate(self) -> None:
        """Check closure under faces and monotonicity of values."""
        for k in range(1, len(self.simplices)):
            if len(self.simplices[k]) == 0:
                continue
            facets = self.facet_positions(k)
            fvals = self.order_value[facets]
            own = self.values[k][:, None]
            bad = fvals > own
            if bad.any():
                j = int(np.argwhere(bad)[0][0])
                raise DataError(f"simplex {tuple(self.simplices[k][j])} enters before one of its faces")

    def restrict(self, maxdim: int) -> "Filtration":
        return Filtration(self.simplices[: maxdim + 1], self.values[: maxdim + 1])


def _enforce_monotone(simplices, values, n):
    # lift each value to the max of its facets' values (rounding guard)
    for k in range(1, len(simplices)):
        s = simplices[k]
        if len(s) == 0:
            continue
        v = values[k]
        for i in range(k + 1):
            idx = _lookup(simplices[k - 1], np.delete(s, i, axis=1), n)
            v = np.maximum(v, values[k - 1][idx])
        values[k] = v
    return values


def _expand_cliques(simplices, adjacency, cap, total):
    """All (k+1)-cliques extending the k-cliques ``simplices`` with a higher vertex.

    ``adjacency`` is the strict upper-triangular boolean adjacency matrix.
    """
    n = adjacency.shape[0]
    m = len(simplices)
    chunk = max(1, int(2e7 // max(n, 1)))
    parts = []
    count = 0
    for lo in range(0, m, chunk):
        block = simplices[lo : lo + chunk]
        mask = adjacency[block[:, 0]].copy()
        for c in range(1, block.shape[1]):
            mask &= adjacency[block[:, c]]
        rows, cols = np.nonzero(mask)
        count += len(rows)
        if total + count > cap:
            done = min(lo + chunk, m)
            estimate = int((total + count) * m / max(done, 1))
            raise ResourceCapError(
                f"simplex count exceeds cap {cap} (estimated at least {estimate}); "
                f"lower maxdim/threshold or raise {CAP_ENV_VAR}",
                estimate=estimate,
            )
        parts.append(np.column_stack([block[rows], cols]))
    if not parts:
        return np.empty((0, simplices.shape[1] + 1), dtype=np.int64)
    return np.vstack(parts).astype(np.int64)


def _clique_skeleton(d: np.ndarray, threshold: float, maxdim: int, cap: int):
    """Vertex sets of all cliques of the threshold graph, by dimension."""
    n = d.shape[0]
    if n > cap:
        raise ResourceCapError(f"{n} vertices exceed the simplex cap {cap}", estimate=n)
    simplices = [np.arange(n, dtype=np.int64).reshape(-1, 1)]
    total = n
    if maxdim >= 1 and n > 1:
        adjacency = np.triu(d <= threshold, 1)
        for k in range(1, maxdim + 1):
            nxt = _expand_cliques(simplices[-1], adjacency, cap, total)
            if len(nxt) == 0:
                break
            simplices.append(nxt)
            total += len(nxt)
    return simplices


def _check_args(threshold, maxdim):
    if not threshold >= 0:
        raise DataError("threshold must be nonnegative")
    if int(maxdim) != maxdim or maxdim < 0:
        raise DataError("maxdim must be a nonnegative integer")


def build_rips(
    space: Union[DistanceMatrix, PointCloud],
    threshold: float = np.inf,
    maxdim: int = 1,
    max_simplices=None,
) -> Filtration:
    """Vietoris-Rips filtration truncated at ``threshold``.

    A simplex is present when all its pairwise distances are at most
    ``threshold`` and enters at the largest of them.
    """
    _check_args(threshold, maxdim)
    dm = as_distance_matrix(space)
    d = dm.entries
    cap = simplex_cap(max_simplices)
    simplices = _clique_skeleton(d, threshold, int(maxdim), cap)
    values = [np.zeros(dm.n)]
    for k in range(1, len(simplices)):
        s = simplices[k]
        v = np.zeros(len(s))
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                np.maximum(v, d[s[:, i], s[:, j]], out=v)
        values.append(v)
    return Filtration(simplices, values)


def _triangle_meb_radius(p0, p1, p2):
    """Vectorised MEB radius of triangles given as three (m, D) arrays."""
    a2 = np.einsum("ij,ij->i", p1 - p2, p1 - p2)
    b2 = np.einsum("ij,ij->i", p0 - p2, p0 - p2)
    c2 = np.einsum("ij,ij->i", p0 - p1, p0 - p1)
    sides2 = np.sort(np.column_stack([a2, b2, c2]), axis=1)
    longest = np.sqrt(sides2[:, 2]) / 2
    obtuse = sides2[:, 0] + sides2[:, 1] <= sides2[:, 2]
    # 16 area^2 = 4 a^2 b^2 - (a^2 + b^2 - c^2)^2 (any labelling)
    u = p1 - p0
    w = p2 - p0
    uu = np.einsum("ij,ij->i", u, u)
    ww = np.einsum("ij,ij->i", w, w)
    uw = np.einsum("ij,ij->i", u, w)
    area4 = np.maximum(uu * ww - uw * uw, 0.0)  # (2 * area)^2
    with np.errstate(divide="ignore", invalid="ignore"):
        circ = np.sqrt(a2 * b2 * c2 / (4.0 * area4))
    r = np.where(obtuse | ~np.isfinite(circ), longest, circ)
    return np.maximum(r, longest)


def build_cech(cloud: PointCloud, threshold: float = np.inf, maxdim: int = 1, max_simplices=None) -> Filtration:
    """Cech filtration: a simplex enters at the radius of the smallest ball
    enclosing its vertices.

    Candidates come from the Rips complex at ``2 * threshold``, which
    contains every simplex whose enclosing radius is at most ``threshold``.
    """
    if not isinstance(cloud, PointCloud):
        raise DataError("the Cech builder needs Euclidean coordinates (a PointCloud)")
    _check_args(threshold, maxdim)
    pts = cloud.points
    dm = as_distance_matrix(cloud)
    cap = simplex_cap(max_simplices)
    candidates = _clique_skeleton(dm.entries, 2 * threshold, int(maxdim), cap)
    values = [np.zeros(len(pts))]
    for k in range(1, len(candidates)):
        s = candidates[k]
        if k == 1:
            v = dm.entries[s[:, 0], s[:, 1]] / 2
        elif k == 2:
            v = _triangle_meb_radius(pts[s[:, 0]], pts[s[:, 1]], pts[s[:, 2]])
        else:
            v = np.array([minimal_enclosing_ball(pts[row])[1] for row in s])
        values.append(v)
    values = _enforce_monotone(candidates, values, len(pts))
    # after the monotone pass every face of a kept simplex is kept
    simplices = [s[v <= threshold] for s, v in zip(candidates, values)]
    values = [v[v <= threshold] for v in values]
    return Filtration(simplices, values)


def build_alpha_2d(cloud: PointCloud) -> Filtration:
    """Alpha filtration of a planar point set (radius convention).

    Triangles of the Delaunay triangulation enter at their circumradius.
    An edge enters at half its length when its diametral disk contains no
    other point (Gabriel edge), otherwise at the smallest value of its
    incident triangles.  Collinear input yields the path through the
    sorted points.
    """
    if not isinstance(cloud, PointCloud) or cloud.ambient_dim != 2:
        raise DataError("build_alpha_2d needs a planar PointCloud")
    pts = cloud.points
    n = len(pts)
    if len(np.unique(pts, axis=0)) != n:
        raise DataError("alpha complex input contains repeated points")
    vertices = np.arange(n, dtype=np.int64).reshape(-1, 1)
    zeros = np.zeros(n)
    if n == 1:
        return Filtration([vertices], [zeros])
    tri = delaunay_triangles(pts)
    if len(tri) == 0:
        # collinear: consecutive points along the line, all Gabriel
        direction = pts[-1] - pts[0] if n > 1 else np.zeros(2)
        if not np.any(direction):
            direction = pts[np.argmax(np.linalg.norm(pts - pts[0], axis=1))] - pts[0]
        order = np.lexsort((pts @ np.array([-direction[1], direction[0]]), pts @ direction))
        edges = np.sort(np.column_stack([order[:-1], order[1:]]), axis=1)
        ev = np.linalg.norm(pts[edges[:, 0]] - pts[edges[:, 1]], axis=1) / 2
        return Filtration([vertices, edges], [zeros, ev])

    a, b, c = pts[tri[:, 0]], pts[tri[:, 1]], pts[tri[:, 2]]
    la = np.linalg.norm(b - c, axis=1)
    lb = np.linalg.norm(a - c, axis=1)
    lc = np.linalg.norm(a - b, axis=1)
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    tri_val = la * lb * lc / (2 * np.abs(cross))

    # edges with their opposite vertex and incident triangle
    e_u = np.concatenate([tri[:, 1], tri[:, 2], tri[:, 0]])
    e_v = np.concatenate([tri[:, 2], tri[:, 0], tri[:, 1]])
    e_opp = np.concatenate([tri[:, 0], tri[:, 1], tri[:, 2]])
    e_tri = np.tile(np.arange(len(tri)), 3)
    lo, hi = np.minimum(e_u, e_v), np.maximum(e_u, e_v)
    key = lo * n + hi
    uniq, inverse = np.unique(key, return_inverse=True)
    edges = np.column_stack([uniq // n, uniq % n])
    pu, pv, po = pts[lo], pts[hi], pts[e_opp]
    # opposite vertex strictly inside the diametral disk
    encroach = np.einsum("ij,ij->i", po - pu, po - pv) < 0
    attached = np.zeros(len(uniq), dtype=bool)
    np.logical_or.at(attached, inverse, encroach)
    min_tri = np.full(len(uniq), np.inf)
    np.minimum.at(min_tri, inverse, tri_val[e_tri])
    half = np.linalg.norm(pts[edges[:, 0]] - pts[edges[:, 1]], axis=1) / 2
    edge_val = np.where(attached, min_tri, np.minimum(half, min_tri))
    tri_sorted = np.sort(tri, axis=1)
    return Filtration([vertices, edges, tri_sorted], [zeros, edge_val, tri_val])


class Builder:
    """A filtration recipe: ``kind`` in {'rips', 'cech', 'alpha2d'}."""

    KINDS = ("rips", "cech", "alpha2d")

    def __init__(self, kind: str = "rips", threshold: float = np.inf, maxdim: int = 1, max_simplices=None):
        if kind not in self.KINDS:
            raise DataError(f"unknown builder {kind!r}; expected one of {self.KINDS}")
        self.kind = kind
        self.threshold = float(threshold)
        self.maxdim = int(maxdim)
        self.max_simplices = max_simplices

    def __call__(self, space) -> Filtration:
        if self.kind == "rips":
            return build_rips(space, self.threshold, self.maxdim, self.max_simplices)
        if self.kind == "cech":
            return build_cech(space, self.threshold, self.maxdim, self.max_simplices)
        return build_alpha_2d(space)

    def __repr__(self):
        if self.kind == "alpha2d":
            return "Builder('alpha2d')"
        return f"Builder({self.kind!r}, threshold={self.threshold!r}, maxdim={self.maxdim})"

    def __eq__(self, other):
        return isinstance(other, Builder) and repr(self) == repr(other)
