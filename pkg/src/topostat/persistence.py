"""Persistent homology over Z/2 by boundary-matrix column reduction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .complexes import Filtration
from .errors import DataError, ResourceCapError

INF = float("inf")

# simplex count above which the brute-force rank oracle refuses to run
ORACLE_CAP = 300


@dataclass(frozen=True)
class BoundaryMatrix:
    """Z/2 boundary matrix in compressed-column form.

    Column ``j`` holds the filtration positions of the facets of simplex
    ``j`` in increasing order: ``indices[indptr[j]:indptr[j + 1]]``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    dims: np.ndarray

    def __len__(self):
        return len(self.dims)

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(int(x) for x in self.indices[self.indptr[j] : self.indptr[j + 1]])

    @property
    def columns(self) -> List[Tuple[int, ...]]:
        return [self.column(j) for j in range(len(self))]


def boundary_matrix(f: Filtration) -> BoundaryMatrix:
    n = len(f)
    lengths = np.where(f.order_dim > 0, f.order_dim + 1, 0)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(lengths, out=indptr[1:])
    indices = np.empty(indptr[-1], dtype=np.int64)
    for k in range(1, f.maxdim + 1):
        if len(f.simplices[k]) == 0:
            continue
        facets = np.sort(f.facet_positions(k), axis=1)
        pos = f.position[k]
        starts = indptr[pos]
        for i in range(k + 1):
            indices[starts + i] = facets[:, i]
    return BoundaryMatrix(indptr=indptr, indices=indices, dims=f.order_dim.copy())


@dataclass(frozen=True)
class PersistencePairing:
    pairs: Tuple[Tuple[int, int], ...]
    essential: Tuple[int, ...]


def _to_bits(column) -> int:
    if not column:
        return 0
    buf = bytearray(max(column) // 8 + 1)
    for i in column:
        buf[i >> 3] |= 1 << (i & 7)
    return int.from_bytes(buf, "little")


def _from_bits(bits: int) -> List[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def _edge_pairs(m: BoundaryMatrix, pivot_of: dict) -> None:
    """Pair edges with vertices by union-find (elder rule).

    Reducing an edge column only ever involves other edge columns, and its
    pivot is the younger of the two component roots it joins, so the
    pairing of dimension 1 is a union-find pass in filtration order.
    """
    edges = np.flatnonzero(m.dims == 1)
    if len(edges) == 0:
        return
    start = m.indptr[edges]
    us = m.indices[start].tolist()
    vs = m.indices[start + 1].tolist()
    parent = list(range(len(m)))
    for j, u, v in zip(edges.tolist(), us, vs):
        while parent[u] != u:
            parent[u] = u = parent[parent[u]]
        while parent[v] != v:
            parent[v] = v = parent[parent[v]]
        if u == v:
            continue
        if u > v:
            u, v = v, u
        # v is the younger root: its class dies here
        parent[v] = u
        pivot_of[v] = j


def reduce(m: BoundaryMatrix, clearing: bool = True, dense_fraction: float = 1 / 64) -> PersistencePairing:
    """Column reduction of the boundary matrix over Z/2.

    With ``clearing`` the columns are processed by decreasing dimension, a
    column whose index already appeared as a pivot is zeroed without work
    (it is known to be a birth), and edges are paired by union-find.
    Without it every column is reduced by plain left-to-right column
    additions.  Working columns are Python sets and switch to big-integer
    bitsets once longer than ``dense_fraction * n``.  Both modes produce
    the same pairing.
    """
    n = len(m)
    indptr = m.indptr.tolist()
    indices = m.indices.tolist()
    dims = m.dims
    dense_len = max(1, int(n * dense_fraction))

    if clearing:
        order = []
        for d in sorted(set(dims.tolist()), reverse=True):
            if d > 1:
                order.extend(np.flatnonzero(dims == d).tolist())
    else:
        order = np.flatnonzero(dims > 0).tolist()

    pivot_of = {}  # lowest row index -> column
    stored = {}  # column -> reduced column (sorted list or bitset int)
    cleared = bytearray(n)
    for j in order:
        if cleared[j]:
            continue
        start, end = indptr[j], indptr[j + 1]
        low = indices[end - 1]
        k = pivot_of.get(low)
        if k is None:
            pivot_of[low] = j
            stored[j] = indices[start:end]
            if clearing:
                cleared[low] = 1
            continue
        work = set(indices[start:end])
        bits = None
        while True:
            other = stored[k]
            if bits is None and (isinstance(other, int) or len(work) + len(other) > dense_len):
                bits = _to_bits(work)
            if bits is None:
                work.symmetric_difference_update(other)
                low = max(work) if work else -1
            else:
                bits ^= other if isinstance(other, int) else _to_bits(other)
                low = bits.bit_length() - 1
            if low < 0:
                break
            k = pivot_of.get(low)
            if k is None:
                break
        if low >= 0:
            pivot_of[low] = j
            stored[j] = bits if bits is not None else sorted(work)
            if clearing:
                cleared[low] = 1
    if clearing:
        # edges killed by triangles are cleared; the rest go to union-find
        _edge_pairs(m, pivot_of)
    paired = set(pivot_of.values())
    pairs = tuple(sorted((low, j) for low, j in pivot_of.items()))
    essential = tuple(j for j in range(n) if j not in pivot_of and j not in paired)
    return PersistencePairing(pairs=pairs, essential=essential)


class PersistenceDiagram:
    """Multiset of (dim, birth, death) points; death may be ``inf``.

    Points on the diagonal are never stored.  Points are kept sorted by
    (dim, birth, death).
    """

    def __init__(self, points=()):
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        if np.any(np.isnan(pts)):
            raise DataError("diagram contains NaN")
        if np.any(pts[:, 0] != np.round(pts[:, 0])) or np.any(pts[:, 0] < 0):
            raise DataError("diagram dimensions must be nonnegative integers")
        if np.any(~np.isfinite(pts[:, 1])):
            raise DataError("births must be finite")
        if np.any(pts[:, 2] < pts[:, 1]):
            raise DataError("diagram point with death before birth")
        pts = pts[pts[:, 2] > pts[:, 1]]
        pts = pts[np.lexsort((pts[:, 2], pts[:, 1], pts[:, 0]))]
        pts.setflags(write=False)
        self.points = pts

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, PersistenceDiagram) and np.array_equal(self.points, other.points)

    def __repr__(self):
        return f"PersistenceDiagram({self.points.tolist()!r})"

    @property
    def dims(self):
        return sorted({int(d) for d in self.points[:, 0]})

    def in_dim(self, k: int) -> np.ndarray:
        """(m, 2) array of (birth, death) in homology dimension k."""
        return self.points[self.points[:, 0] == k, 1:]

    def finite(self, k: int) -> np.ndarray:
        p = self.in_dim(k)
        return p[np.isfinite(p[:, 1])]

    def essential(self, k: int) -> np.ndarray:
        """Births of the infinite points in dimension k."""
        p = self.in_dim(k)
        return p[~np.isfinite(p[:, 1]), 0]

    def restrict(self, k: int) -> "PersistenceDiagram":
        return PersistenceDiagram(self.points[self.points[:, 0] == k])

    @classmethod
    def from_pairs(cls, dim: int, pairs) -> "PersistenceDiagram":
        pairs = np.asarray(pairs, dtype=float).reshape(-1, 2)
        return cls(np.column_stack([np.full(len(pairs), dim), pairs]))


def extract_diagram(p: PersistencePairing, f: Filtration) -> PersistenceDiagram:
    vals = f.order_value
    dims = f.order_dim
    pairs = np.array(p.pairs, dtype=np.int64).reshape(-1, 2)
    ess = np.array(p.essential, dtype=np.int64)
    pts = np.concatenate([
        np.column_stack([dims[pairs[:, 0]], vals[pairs[:, 0]], vals[pairs[:, 1]]]),
        np.column_stack([dims[ess], vals[ess], np.full(len(ess), INF)]),
    ])
    return PersistenceDiagram(pts)


def persistence_diagram(f: Filtration, clearing: bool = True) -> PersistenceDiagram:
    return extract_diagram(reduce(boundary_matrix(f), clearing=clearing), f)


def _span_rank(vectors) -> int:
    basis = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


def betti_at(f: Filtration, s: float, t: float, k: int) -> int:
    """Rank of H_k(K_s) -> H_k(K_t) by explicit Z/2 linear algebra.

    Independent of :func:`reduce`; meant as a test oracle on small
    complexes.
    """
    if s > t:
        raise DataError("betti_at needs s <= t")
    if len(f) > ORACLE_CAP:
        raise ResourceCapError(f"rank oracle limited to {ORACLE_CAP} simplices, got {len(f)}")
    entries = f.entries

    def cells(dim, scale):
        return [sx for sx, v in entries if len(sx) == dim + 1 and v <= scale]

    k_cells_t = cells(k, t)
    index_t = {sx: i for i, sx in enumerate(k_cells_t)}
    k_cells_s = [sx for sx in cells(k, s)]

    # cycles of K_s: kernel of the boundary map, tracked as combinations
    if k == 0:
        cycles = [1 << index_t[sx] for sx in k_cells_s]
    else:
        lower = {sx: i for i, sx in enumerate(cells(k - 1, s))}
        rows = {}
        cycles = []
        for sx in k_cells_s:
            bd = 0
            for i in range(len(sx)):
                bd ^= 1 << lower[sx[:i] + sx[i + 1 :]]
            combo = 1 << index_t[sx]
            while bd:
                top = bd.bit_length() - 1
                if top not in rows:
                    rows[top] = (bd, combo)
                    break
                rb, rc = rows[top]
                bd ^= rb
                combo ^= rc
            if not bd:
                cycles.append(combo)

    boundaries = []
    for sx in cells(k + 1, t):
        v = 0
        for i in range(len(sx)):
            v ^= 1 << index_t[sx[:i] + sx[i + 1 :]]
        boundaries.append(v)
    return _span_rank(cycles + boundaries) - _span_rank(boundaries)


def diagram_betti(d: PersistenceDiagram, s: float, t: float, k: int) -> int:
    """Persistent Betti number read off a diagram: points born at or
    before s that die after t."""
    p = d.in_dim(k)
    return int(np.count_nonzero((p[:, 0] <= s) & (p[:, 1] > t)))
