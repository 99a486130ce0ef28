"""Samplers, the convergence-rate protocol and the bound calculators.

Rates and bounds are returned without the unknown multiplicative
constants of the minimax theorems; only quantities that are fully
determined by their arguments are computed.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import beta as beta_fn
from scipy.special import gamma as gamma_fn

from .complexes import Builder
from .diagrams import bottleneck_distance
from .errors import DataError, ReplicationError
from .metric import DistanceMatrix, PointCloud, euclidean_distance_matrix
from .persistence import INF, PersistenceDiagram, persistence_diagram

SPACE_KINDS = ("lissajous", "sphere", "torus", "ball_boundary_density", "dirac_pair", "highdim_circle")

# default dense reference size relative to the largest grid size
DENSE_FACTOR = 20


@dataclass(frozen=True)
class SpaceSpec:
    """A measured metric space to sample from.

    Only the parameters of the chosen ``kind`` are used: ``d`` and
    ``alpha`` for ball_boundary_density, ``rho0`` for dirac_pair and
    ``D`` for highdim_circle.
    """

    kind: str
    d: int = 1
    alpha: float = 0.0
    rho0: float = 1.0
    D: int = 3

    def __post_init__(self):
        if self.kind not in SPACE_KINDS:
            raise DataError(f"unsupported space kind {self.kind!r}; expected one of {SPACE_KINDS}")
        if self.kind == "ball_boundary_density" and (self.d < 1 or self.alpha < 0):
            raise DataError("ball_boundary_density needs d >= 1 and alpha >= 0")
        if self.kind == "dirac_pair" and not self.rho0 > 0:
            raise DataError("dirac_pair needs rho0 > 0")
        if self.kind == "highdim_circle" and self.D < 2:
            raise DataError("highdim_circle needs D >= 2")

    def params(self) -> dict:
        return {
            "ball_boundary_density": {"d": self.d, "alpha": self.alpha},
            "dirac_pair": {"rho0": self.rho0},
            "highdim_circle": {"D": self.D},
        }.get(self.kind, {})


@dataclass(frozen=True)
class ExperimentConfig:
    """One convergence experiment.

    ``reference`` is ``"dense"`` (diagram of one sample of size
    ``dense_n``, default ``DENSE_FACTOR`` times the largest grid size) or
    ``"exact"`` (closed-form diagram, see :func:`exact_reference`).
    """

    space: SpaceSpec
    n_grid: Tuple[int, ...]
    k: int
    seed: int
    builder: Builder
    homology_dim: int
    reference: str = "dense"
    dense_n: Optional[int] = None

    def __post_init__(self):
        grid = tuple(int(n) for n in self.n_grid)
        object.__setattr__(self, "n_grid", grid)
        if not grid or any(n < 1 for n in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise DataError("n_grid must be a non-empty strictly increasing list of positive sizes")
        if self.k < 1:
            raise DataError("k must be at least 1")
        if self.homology_dim < 0:
            raise DataError("homology_dim must be nonnegative")
        if self.reference not in ("dense", "exact"):
            raise DataError(f"reference must be 'dense' or 'exact', got {self.reference!r}")
        if self.dense_n is not None and self.dense_n < grid[-1]:
            raise DataError("dense_n must be at least the largest grid size")

    @property
    def reference_n(self) -> int:
        return self.dense_n if self.dense_n is not None else DENSE_FACTOR * self.n_grid[-1]


@dataclass(frozen=True)
class ExperimentResult:
    """Per-n mean and standard deviation of the bottleneck error, and the
    least-squares fit of log(mean_db) against log(log(n) / n).

    The fit fields are NaN when some mean is zero or infinite.
    ``reference_bias`` bounds the error of a dense reference (twice its
    Hausdorff distance to the space, estimated on a fine parameter grid);
    it is 0 for exact references and NaN when not available.
    """

    per_n: Tuple[Tuple[int, float, float], ...]
    slope: float
    intercept: float
    slope_stderr: float
    reference_bias: float = float("nan")

    def __eq__(self, other):
        if not isinstance(other, ExperimentResult):
            return NotImplemented
        a = np.array([self.slope, self.intercept, self.slope_stderr, self.reference_bias])
        b = np.array([other.slope, other.intercept, other.slope_stderr, other.reference_bias])
        return self.per_n == other.per_n and np.array_equal(a, b, equal_nan=True)


@dataclass(frozen=True)
class BoundParams:
    """Constants of the tail, rate and lower-bound calculators.

    ``C_a``, ``C_b``, ``delta_a``, ``eps0``, ``f_max`` describe the
    boundary-density model and ``A``, ``B`` the manifold model; they are
    only consumed by the total-variation calculators.
    """

    a: float = 1.0
    b: float = 1.0
    n: int = 1
    eps: float = 0.1
    level: float = 0.05
    d: int = 1
    alpha_density: float = 1.0
    kappa: float = 1.0
    C_a: float = 1.0
    C_b: float = 1.0
    delta_a: float = 1.0
    eps0: float = 1.0
    f_max: float = 1.0
    A: float = 1.0
    B: float = 1.0

    def __post_init__(self):
        for name in ("a", "b", "n", "eps", "d", "alpha_density", "kappa", "C_a", "C_b", "delta_a", "eps0", "f_max", "A", "B"):
            if not getattr(self, name) > 0:
                raise DataError(f"{name} must be positive")
        if not 0 < self.level < 1:
            raise DataError("level must lie in (0, 1)")


# --- sampling -------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def lissajous_curve(t):
    t = np.asarray(t, dtype=float)
    return np.column_stack([np.sin(3 * t + np.pi / 2), np.sin(2 * t)])


def torus_surface(u, v):
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    r = 5 + np.cos(u)
    return np.column_stack([r * np.cos(v), r * np.sin(v), np.sin(u)])


def _circle_frame(D: int, seed) -> np.ndarray:
    # orthonormal 2-frame of R^D, derived from the seed
    g = _rng(np.random.SeedSequence([int(seed), D, 0x5EED]))
    q, _ = np.linalg.qr(g.standard_normal((D, 2)))
    return q


def sample(space: SpaceSpec, n: int, seed) -> PointCloud | DistanceMatrix:
    """Draw ``n`` i.i.d. points from ``space``; deterministic in ``seed``.

    The torus is sampled with the push-forward of the uniform measure on
    the parameter square, which is not the uniform area measure.  The
    high-dimensional circle is returned as a distance matrix only.
    """
    if n < 1:
        raise DataError("sample size must be at least 1")
    kind = space.kind
    if kind == "ball_boundary_density":
        return sample_boundary_density(space.d, space.alpha, n, seed)
    rng = _rng(seed)
    if kind == "lissajous":
        return PointCloud(lissajous_curve(rng.uniform(0, 2 * np.pi, n)))
    if kind == "sphere":
        g = rng.standard_normal((n, 3))
        return PointCloud(g / np.linalg.norm(g, axis=1, keepdims=True))
    if kind == "torus":
        u = rng.uniform(0, 2 * np.pi, n)
        v = rng.uniform(0, 2 * np.pi, n)
        return PointCloud(torus_surface(u, v))
    if kind == "dirac_pair":
        # mass 1 - 1/n at 0 and 1/n at rho0
        far = rng.random(n) < 1 / n
        return PointCloud(np.where(far, space.rho0, 0.0).reshape(-1, 1))
    if kind == "highdim_circle":
        t = rng.uniform(0, 2 * np.pi, n)
        pts = np.column_stack([np.cos(t), np.sin(t)]) @ _circle_frame(space.D, seed).T
        return euclidean_distance_matrix(PointCloud(pts))
    raise DataError(f"unsupported space kind {kind!r}")


def sample_boundary_density(d: int, alpha: float, n: int, seed) -> PointCloud:
    """Sample the unit ball of R^d with density proportional to
    (1 - |x|)^alpha.

    The radius has density proportional to r^(d-1) (1 - r)^alpha, a
    Beta(d, alpha + 1) law.  It is drawn by rejection: propose from the
    uniform-ball radial law d r^(d-1) and accept with probability
    (1 - r)^alpha.  The acceptance rate is d B(d, alpha + 1), which sizes
    the proposal batches.
    """
    if d < 1 or alpha < 0:
        raise DataError("sample_boundary_density needs d >= 1 and alpha >= 0")
    rng = _rng(seed)
    accept_rate = d * beta_fn(d, alpha + 1)
    radii = np.empty(0)
    while len(radii) < n:
        m = int(math.ceil((n - len(radii)) / accept_rate * 1.1)) + 16
        r = rng.random(m) ** (1.0 / d)
        keep = rng.random(m) < (1 - r) ** alpha
        radii = np.concatenate([radii, r[keep]])
    radii = radii[:n]
    g = rng.standard_normal((n, d))
    directions = g / np.linalg.norm(g, axis=1, keepdims=True)
    return PointCloud(directions * radii[:, None])


# --- references -----------------------------------------------------------


def _parameter_grid(space: SpaceSpec, m: int, seed) -> Optional[np.ndarray]:
    """Dense deterministic point grid on the space, or None."""
    if space.kind == "lissajous":
        return lissajous_curve(np.linspace(0, 2 * np.pi, m, endpoint=False))
    if space.kind == "highdim_circle":
        t = np.linspace(0, 2 * np.pi, m, endpoint=False)
        return np.column_stack([np.cos(t), np.sin(t)]) @ _circle_frame(space.D, seed).T
    if space.kind == "torus":
        s = int(math.sqrt(m))
        u, v = np.meshgrid(np.linspace(0, 2 * np.pi, s, endpoint=False), np.linspace(0, 2 * np.pi, 5 * s, endpoint=False))
        return torus_surface(u.ravel(), v.ravel())
    if space.kind == "sphere":
        # Fibonacci lattice
        i = np.arange(m) + 0.5
        z = 1 - 2 * i / m
        phi = np.pi * (1 + 5 ** 0.5) * i
        r = np.sqrt(1 - z * z)
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    return None


def reference_bias(space: SpaceSpec, dense: PointCloud | DistanceMatrix, seed, grid_factor: int = 20) -> float:
    """Twice the Hausdorff distance from the space to a dense sample,
    estimated on a parameter grid ``grid_factor`` times denser.  Bounds the
    bottleneck error of the dense reference.  NaN when the space has no
    grid."""
    grid = _parameter_grid(space, grid_factor * len(dense), seed)
    if grid is None:
        return float("nan")
    if isinstance(dense, DistanceMatrix):
        # the circle sample is only known through distances; resample its
        # coordinates from the same seed
        t = _rng(seed).uniform(0, 2 * np.pi, dense.n)
        pts = np.column_stack([np.cos(t), np.sin(t)]) @ _circle_frame(space.D, seed).T
    else:
        pts = dense.points
    dist, _ = cKDTree(pts).query(grid)
    return 2 * float(dist.max())


def reference_diagram(space: SpaceSpec, dense_n: int, seed, builder: Builder, dim: int) -> PersistenceDiagram:
    """Diagram of ``builder`` on one dense sample of ``dense_n`` points,
    restricted to homology dimension ``dim``.  Deaths in dimension ``dim``
    need simplices of dimension ``dim + 1``, so Rips and Cech builders
    should have ``maxdim > dim``."""
    return persistence_diagram(builder(sample(space, dense_n, seed))).restrict(dim)


def exact_reference(space: SpaceSpec, builder: Builder, dim: int) -> PersistenceDiagram:
    """Closed-form diagram of the whole space, where one is known.

    * ball_boundary_density, any builder, dim 0: the support is a ball,
      hence connected: one essential class born at 0.
    * sphere, dim 1: empty.
    * torus, Rips with threshold below sqrt(3), dim 1: the two generating
      loops, born at 0 and alive at the threshold.
    * highdim_circle, Rips, dim 1: the loop is born at 0 and dies when
      inscribed equilateral triangles appear, at sqrt(3).
    * dirac_pair, dim 0: the support is {0, rho0}; a Rips or Cech edge
      merges it at rho0 or rho0 / 2.
    """
    kind = space.kind
    thr = builder.threshold
    pts = []
    if kind == "ball_boundary_density" and dim == 0:
        pts = [(0, 0.0, INF)]
    elif kind == "sphere" and dim == 1:
        pts = []
    elif kind == "torus" and dim == 1 and builder.kind == "rips" and thr < math.sqrt(3):
        pts = [(1, 0.0, INF), (1, 0.0, INF)]
    elif kind == "highdim_circle" and dim == 1 and builder.kind == "rips":
        pts = [(1, 0.0, math.sqrt(3) if thr >= math.sqrt(3) else INF)]
    elif kind == "dirac_pair" and dim == 0 and builder.kind in ("rips", "cech"):
        merge = space.rho0 if builder.kind == "rips" else space.rho0 / 2
        pts = [(0, 0.0, INF)] + ([(0, 0.0, merge)] if merge <= thr else [(0, 0.0, INF)])
    else:
        raise DataError(f"no exact reference for {kind} with {builder!r} in dimension {dim}")
    return PersistenceDiagram(pts)


# --- the convergence protocol ---------------------------------------------


def replication_seed(seed: int, n: int, rep: int) -> int:
    """Seed of replication ``rep`` at size ``n``; independent of scheduling."""
    return int(np.random.SeedSequence([int(seed), int(n), int(rep)]).generate_state(1, np.uint64)[0])


def reference_seed(seed: int) -> int:
    return int(np.random.SeedSequence([int(seed), 0x5EF]).generate_state(1, np.uint64)[0])


def _replicate(args):
    space, n, seed, builder, dim, reference = args
    X = sample(space, n, seed)
    d = persistence_diagram(builder(X)).restrict(dim)
    return bottleneck_distance(d, reference, dim)


def slope_regression(xs: Sequence[float], ys: Sequence[float]):
    """Ordinary least squares y = slope x + intercept.

    Returns (slope, intercept, stderr of the slope); the stderr is 0 for
    two points.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) != len(y) or len(x) < 2:
        raise DataError("slope_regression needs at least two (x, y) pairs")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DataError("slope_regression needs finite values")
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0:
        raise DataError("slope_regression: all x values are equal")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    if len(x) == 2:
        return slope, intercept, 0.0
    resid = y - (slope * x + intercept)
    stderr = math.sqrt(float(np.sum(resid ** 2)) / (len(x) - 2) / sxx)
    return slope, intercept, stderr


def fit_result(per_n, reference_bias=float("nan")) -> ExperimentResult:
    ns = np.array([p[0] for p in per_n], dtype=float)
    means = np.array([p[1] for p in per_n], dtype=float)
    if len(ns) >= 2 and np.all(np.isfinite(means)) and np.all(means > 0):
        slope, intercept, stderr = slope_regression(np.log(np.log(ns) / ns), np.log(means))
    else:
        slope = intercept = stderr = float("nan")
    return ExperimentResult(tuple(per_n), slope, intercept, stderr, reference_bias)


def convergence_experiment(cfg: ExperimentConfig, threads: int = 1, reference: Optional[PersistenceDiagram] = None) -> ExperimentResult:
    """Run the sample / build / persist / compare protocol.

    Every replication draws its own seed from (seed, n, replication), so
    the result does not depend on ``threads``.  A precomputed
    ``reference`` diagram may be passed to skip its construction.
    """
    dim = cfg.homology_dim
    bias = float("nan")
    if reference is None:
        if cfg.reference == "exact":
            reference = exact_reference(cfg.space, cfg.builder, dim)
            bias = 0.0
        else:
            ref_seed = reference_seed(cfg.seed)
            reference = reference_diagram(cfg.space, cfg.reference_n, ref_seed, cfg.builder, dim)
            bias = reference_bias(cfg.space, sample(cfg.space, cfg.reference_n, ref_seed), ref_seed)
    reference = reference.restrict(dim)
    jobs = [(n, rep, replication_seed(cfg.seed, n, rep)) for n in cfg.n_grid for rep in range(cfg.k)]
    args = [(cfg.space, n, s, cfg.builder, dim, reference) for n, _, s in jobs]
    dist = {}
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_replicate, a) for a in args]
            for (n, rep, s), fut in zip(jobs, futures):
                try:
                    dist[n, rep] = fut.result()
                except Exception as exc:
                    raise ReplicationError(n, rep, s, exc) from exc
    else:
        for (n, rep, s), a in zip(jobs, args):
            try:
                dist[n, rep] = _replicate(a)
            except Exception as exc:
                raise ReplicationError(n, rep, s, exc) from exc
    per_n = []
    for n in cfg.n_grid:
        v = np.array([dist[n, rep] for rep in range(cfg.k)])
        if np.all(np.isfinite(v)):
            mean = float(v.mean())
            std = float(v.std(ddof=1)) if cfg.k > 1 else 0.0
        else:
            mean, std = INF, INF
        per_n.append((n, mean, std))
    return fit_result(per_n, bias)


# --- bound calculators ----------------------------------------------------


def _positive(**kw):
    for name, v in kw.items():
        if not v > 0:
            raise DataError(f"{name} must be positive, got {v!r}")


def hausdorff_tail_bound(a: float, b: float, n: int, eps: float) -> float:
    """Upper bound on P(d_H(support, sample) > 2 eps) under the (a, b)
    standard assumption: min(1, 2^b / (a eps^b) exp(-n a eps^b))."""
    _positive(a=a, b=b, n=n, eps=eps)
    x = a * eps ** b
    return min(1.0, 2 ** b / x * math.exp(-n * x))


def minimax_rate(b: float, n: float) -> float:
    """(ln n / n)^(1/b)."""
    _positive(b=b, n=n)
    return (math.log(n) / n) ** (1 / b)


def minimax_rate_density(d: int, alpha: float, n: float) -> float:
    """n^(-1/(d + alpha)) for densities vanishing like distance^alpha at
    the boundary of a d-dimensional support."""
    _positive(d=d, n=n)
    if alpha < 0:
        raise DataError("alpha must be nonnegative")
    return n ** (-1 / (d + alpha))


def minimax_rate_manifold(d: int, n: float) -> float:
    """n^(-2/d) for d-dimensional manifolds observed with perpendicular
    noise."""
    _positive(d=d, n=n)
    return n ** (-2 / d)


def psi(eta: float) -> float:
    """exp(-eta) / eta, strictly decreasing from +inf to 0 on (0, inf)."""
    return math.exp(-eta) / eta


def psi_inverse(y: float, rtol: float = 1e-12) -> float:
    """Solve psi(eta) = y by bisection on log(psi), which is monotone."""
    if not y > 0 or not math.isfinite(y):
        raise DataError(f"psi takes values in (0, inf); cannot invert {y!r}")
    target = math.log(y)

    def f(eta):
        return -eta - math.log(eta) - target

    lo, hi = 1.0, 1.0
    while f(lo) < 0:
        lo /= 2
    while f(hi) > 0:
        hi *= 2
    # f(lo) >= 0 >= f(hi)
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rtol * hi or mid in (lo, hi):
            break
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def confidence_radius(a: float, b: float, n: int, level: float) -> float:
    """Radius r with P(d_H > r) <= level from the tail bound:
    [(1 / (n a)) psi^{-1}(level / (n 2^b))]^(1/b)."""
    _positive(a=a, b=b, n=n)
    if not 0 < level < 1:
        raise DataError("level must lie in (0, 1)")
    eta = psi_inverse(level / (n * 2 ** b))
    return (eta / (n * a)) ** (1 / b)


def lecam_bound(rho: float, tv: float, n: int) -> float:
    """Two-point minimax lower bound rho / 8 (1 - tv)^(2n)."""
    if rho < 0 or not 0 <= tv <= 1 or n < 1:
        raise DataError("lecam_bound needs rho >= 0, tv in [0, 1], n >= 1")
    return rho / 8 * (1 - tv) ** (2 * n)


def dirac_pair_demo(n: int, rho0: float):
    """Two-point construction: P0 = delta_x and P1 = (1 - 1/n) delta_x +
    (1/n) delta_y with |x - y| = rho0.

    The supports {x} and {x, y} are pushed through the Rips builder and the
    persistence and bottleneck code; the result must equal rho0 / 2 (the
    extra 0-dimensional bar (0, rho0) matched to the diagonal).  Returns
    (tv, d_b, lower bound).
    """
    if n < 2 or not rho0 > 0:
        raise DataError("dirac_pair_demo needs n >= 2 and rho0 > 0")
    rips = Builder("rips", threshold=INF, maxdim=1)
    d0 = persistence_diagram(rips(PointCloud([[0.0]])))
    d1 = persistence_diagram(rips(PointCloud([[0.0], [rho0]])))
    db = bottleneck_distance(d0, d1, 0)
    if db != rho0 / 2:
        raise AssertionError(f"pipeline bottleneck {db!r} differs from rho0 / 2 = {rho0 / 2!r}")
    tv = 2 / n
    return tv, db, lecam_bound(db, tv, n)


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere S^(d-1) in R^d."""
    return float(2 * math.pi ** (d / 2) / gamma_fn(d / 2))


def boundary_density_lower_bound(d: int, alpha: float, C_a: float, eps_n: float, n: int):
    """Two-point construction for boundary-vanishing densities: moving mass
    out of a ball of radius eps_n at a support point opens a gap whose
    0-dimensional bar (0, 2 eps_n) gives d_b = eps_n, at total variation
    2 s_{d-1} C_a eps_n^(d + alpha) / (d + alpha).  Returns
    (tv, d_b, lower bound)."""
    _positive(d=d, C_a=C_a, eps_n=eps_n, n=n)
    tv = 2 * sphere_area(d) * C_a * eps_n ** (d + alpha) / (d + alpha)
    if tv > 1:
        raise DataError(f"total variation {tv} exceeds 1; decrease eps_n or C_a")
    return tv, eps_n, lecam_bound(eps_n, tv, n)


def manifold_lower_bound(C: float, gamma: float, d: int, n: int):
    """Two-point construction for manifolds: a bump of height gamma moves
    the 0-dimensional bar by gamma at total variation at most
    C gamma^(d/2).  Returns (tv bound, d_b, lower bound)."""
    _positive(C=C, gamma=gamma, d=d, n=n)
    tv = min(1.0, C * gamma ** (d / 2))
    return tv, gamma, lecam_bound(gamma, tv, n)
