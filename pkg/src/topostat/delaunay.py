"""Incremental (Bowyer-Watson) Delaunay triangulation in the plane.

Predicates are evaluated in floating point with a static error filter and
fall back to exact rational arithmetic when the filter cannot decide.
Cocircular configurations are resolved by simulation of simplicity: the
lifted coordinate x^2 + y^2 of vertex i is perturbed by eps^(i + 1), so
the vertex with the smallest index dominates.  With this rule the
triangulation is unique and does not depend on insertion order.

The convex hull is handled with ghost triangles that share a vertex at
infinity (``GHOST``).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import DataError

GHOST = -1

_EPS = np.finfo(float).eps / 2
_CCW_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_BOUND = (10.0 + 96.0 * _EPS) * _EPS


def _orient_exact(a, b, c):
    ax, ay = Fraction(a[0]), Fraction(a[1])
    det = (Fraction(b[0]) - ax) * (Fraction(c[1]) - ay) - (Fraction(b[1]) - ay) * (Fraction(c[0]) - ax)
    return (det > 0) - (det < 0)


def orient(a, b, c):
    """Sign of the signed area of (a, b, c); +1 for counter-clockwise."""
    left = (b[0] - a[0]) * (c[1] - a[1])
    right = (b[1] - a[1]) * (c[0] - a[0])
    det = left - right
    if abs(det) > _CCW_BOUND * (abs(left) + abs(right)):
        return 1 if det > 0 else -1
    return _orient_exact(a, b, c)


def _incircle_terms_exact(a, b, c, d):
    dx, dy = Fraction(d[0]), Fraction(d[1])
    adx, ady = Fraction(a[0]) - dx, Fraction(a[1]) - dy
    bdx, bdy = Fraction(b[0]) - dx, Fraction(b[1]) - dy
    cdx, cdy = Fraction(c[0]) - dx, Fraction(c[1]) - dy
    bc = bdx * cdy - cdx * bdy
    ca = cdx * ady - adx * cdy
    ab = adx * bdy - bdx * ady
    det = (adx * adx + ady * ady) * bc + (bdx * bdx + bdy * bdy) * ca + (cdx * cdx + cdy * cdy) * ab
    return det, bc, ca, ab


def _sign(x):
    return (x > 0) - (x < 0)


def incircle(a, b, c, d, ia, ib, ic, id_):
    """+1 if d lies inside the circle through the ccw triangle (a, b, c).

    Never returns 0: exact ties are broken by the perturbation described
    in the module docstring, using the vertex indices ``ia .. id_``.
    """
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    if abs(det) > _ICC_BOUND * permanent:
        return 1 if det > 0 else -1
    det, bc, ca, ab = _incircle_terms_exact(a, b, c, d)
    if det != 0:
        return _sign(det)
    # d(det)/d(lift_a) = bc, .../d(lift_b) = ca, .../d(lift_c) = ab,
    # .../d(lift_d) = -(bc + ca + ab)
    coeffs = sorted([(ia, bc), (ib, ca), (ic, ab), (id_, -(bc + ca + ab))])
    for _, coef in coeffs:
        if coef != 0:
            return _sign(coef)
    raise DataError("degenerate in-circle test: repeated points")


def _insertion_order(pts):
    # boustrophedon order on a coarse grid keeps the walks short
    n = len(pts)
    lo = pts.min(axis=0)
    span = np.maximum(pts.max(axis=0) - lo, 1e-300)
    m = max(1, int(np.sqrt(n / 4)))
    col = np.minimum((m * (pts[:, 0] - lo[0]) / span[0]).astype(int), m - 1)
    ykey = np.where(col % 2 == 0, pts[:, 1], -pts[:, 1])
    return np.lexsort((ykey, col))


class _Triangulation:
    def __init__(self, pts):
        self.p = [(float(x), float(y)) for x, y in pts]
        self.verts = []  # [a, b, c] counter-clockwise; GHOST may fill one slot
        self.nbrs = []  # nbrs[t][i]: triangle across the edge opposite verts[t][i]
        self.alive = []
        self.last = 0

    def _new(self, v):
        self.verts.append(v)
        self.nbrs.append([-1, -1, -1])
        self.alive.append(True)
        return len(self.verts) - 1

    def start(self, i, j, k):
        if orient(self.p[i], self.p[j], self.p[k]) < 0:
            j, k = k, j
        t = self._new([i, j, k])
        g0 = self._new([j, i, GHOST])
        g1 = self._new([k, j, GHOST])
        g2 = self._new([i, k, GHOST])
        self.nbrs[t] = [g1, g2, g0]
        self.nbrs[g0] = [g2, g1, t]
        self.nbrs[g1] = [g0, g2, t]
        self.nbrs[g2] = [g1, g0, t]
        self.last = t

    def _conflict(self, t, q, iq):
        a, b, c = self.verts[t]
        if c == GHOST:
            return self._ghost_conflict(a, b, q)
        if a == GHOST:
            return self._ghost_conflict(b, c, q)
        if b == GHOST:
            return self._ghost_conflict(c, a, q)
        p = self.p
        return incircle(p[a], p[b], p[c], q, a, b, c, iq) > 0

    def _ghost_conflict(self, u, v, q):
        # the interior of the hull lies to the right of u -> v
        pu, pv = self.p[u], self.p[v]
        s = orient(pu, pv, q)
        if s != 0:
            return s > 0
        return min(pu, pv) < q < max(pu, pv)

    def _locate(self, q):
        t = self.last
        v = self.verts[t]
        if GHOST in v:
            t = self.nbrs[t][v.index(GHOST)]
        p = self.p
        verts, nbrs = self.verts, self.nbrs
        while True:
            a, b, c = verts[t]
            if a == GHOST or b == GHOST or c == GHOST:
                return t
            pa, pb, pc = p[a], p[b], p[c]
            if orient(pb, pc, q) < 0:
                t = nbrs[t][0]
            elif orient(pc, pa, q) < 0:
                t = nbrs[t][1]
            elif orient(pa, pb, q) < 0:
                t = nbrs[t][2]
            else:
                return t

    def insert(self, iq):
        q = self.p[iq]
        seed = self._locate(q)
        if not self._conflict(seed, q, iq):
            raise DataError(f"point {iq} coincides with an existing vertex")
        cavity = {seed}
        stack = [seed]
        boundary = []
        verts, nbrs = self.verts, self.nbrs
        while stack:
            t = stack.pop()
            v = verts[t]
            for i in range(3):
                nb = nbrs[t][i]
                if nb in cavity:
                    continue
                if self._conflict(nb, q, iq):
                    cavity.add(nb)
                    stack.append(nb)
                else:
                    boundary.append((v[(i + 1) % 3], v[(i + 2) % 3], nb))
        for t in cavity:
            self.alive[t] = False
        starts = {}
        for u, w, nb in boundary:
            t = self._new([u, w, iq])
            nbrs[t][2] = nb
            nv = verts[nb]
            for k in range(3):
                if nv[(k + 1) % 3] == w and nv[(k + 2) % 3] == u:
                    nbrs[nb][k] = t
                    break
            starts[u] = t
        # the new triangles form a fan around iq: (u, w, iq) meets
        # (w, x, iq) across the edge (w, iq)
        for t in starts.values():
            w = verts[t][1]
            s = starts[w]
            nbrs[t][0] = s
            nbrs[s][1] = t
        self.last = t

    def triangles(self):
        out = [v for v, ok in zip(self.verts, self.alive) if ok and GHOST not in v]
        return np.array(out, dtype=np.int64).reshape(-1, 3)


def delaunay_triangles(points):
    """Delaunay triangles of a planar point set as an (m, 3) index array.

    Triangles are counter-clockwise with rows in lexicographic order of
    their sorted vertex triples.  Returns an empty array when all points
    are collinear or there are fewer than three.  Repeated points raise
    :class:`DataError`.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DataError("delaunay_triangles expects an (n, 2) array")
    n = len(pts)
    if len(np.unique(pts, axis=0)) != n:
        raise DataError("repeated points")
    if n < 3:
        return np.empty((0, 3), dtype=np.int64)
    order = [int(i) for i in _insertion_order(pts)]
    tri = _Triangulation(pts)
    p = tri.p
    first = order[0]
    second = order[1]
    third = next((i for i in order if orient(p[first], p[second], p[i]) != 0), None)
    if third is None:
        return np.empty((0, 3), dtype=np.int64)
    tri.start(first, second, third)
    for i in order:
        if i not in (first, second, third):
            tri.insert(i)
    t = tri.triangles()
    key = np.sort(t, axis=1)
    return t[np.lexsort(key.T[::-1])]
