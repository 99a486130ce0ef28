"""Minimal enclosing ball of a finite point set (Welzl's algorithm)."""

from __future__ import annotations

import numpy as np

from .errors import DataError, ResourceCapError

MAX_EXACT_DIM = 16

# containment slack, relative to the ball radius
_EPS = 1e-12


def circumball(points):
    """Smallest ball with every given point on its boundary.

    The center lies in the affine hull of the points.  Affinely dependent
    input is handled by a least-squares solve, which returns the
    minimum-norm solution inside the hull.
    """
    p = np.asarray(points, dtype=float)
    if len(p) == 1:
        return p[0].copy(), 0.0
    base = p[0]
    A = p[1:] - base
    # center = base + A^T lam with |c - p_i|^2 equal for all i:
    # (A A^T) lam = |A_i|^2 / 2
    G = A @ A.T
    rhs = 0.5 * np.einsum("ij,ij->i", A, A)
    lam = np.linalg.lstsq(G, rhs, rcond=None)[0]
    center = base + lam @ A
    radius = float(np.max(np.linalg.norm(p - center, axis=1)))
    return center, radius


def _inside(center, radius, q):
    return np.linalg.norm(q - center) <= radius * (1 + _EPS) + _EPS


def _welzl(pts, boundary, dim):
    # iterative move-to-front variant of Welzl's recursion
    if boundary:
        center, radius = circumball(np.array(boundary))
    else:
        center, radius = pts[0].copy(), -1.0
    if len(boundary) == dim + 1:
        return center, radius
    for i in range(len(pts)):
        q = pts[i]
        if radius >= 0 and _inside(center, radius, q):
            continue
        center, radius = _welzl(pts[:i], boundary + [q], dim)
    return center, radius


def minimal_enclosing_ball(points, max_dim=MAX_EXACT_DIM):
    """Return ``(center, radius)`` of the smallest closed ball containing
    all points.

    The points are processed in their given order, which makes the result
    deterministic.  Dimension is capped at ``max_dim`` because the
    recursion depth grows with it.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.shape[0] == 0:
        raise DataError("minimal enclosing ball of an empty set")
    if pts.shape[1] > max_dim:
        raise ResourceCapError(f"ambient dimension {pts.shape[1]} exceeds cap {max_dim}")
    # the support set never needs more than min(n, D + 1) points
    dim = min(pts.shape[1], pts.shape[0] - 1)
    center, radius = _welzl(pts, [], dim)
    return center, max(radius, 0.0)
