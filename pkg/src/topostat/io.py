"""Text formats: point clouds, lower-triangular distance matrices,
filtrations, diagrams, experiment configs and results.

Floats are written with ``repr`` (shortest round-trip decimal) so files
carry computed values exactly.  Every file written here ends with a
newline and readers insist on it, which turns a file cut in the middle of
a line into an error instead of a silently shorter structure.  Parse
errors are :class:`FormatError` with the 1-based line number.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import List

import numpy as np

from .complexes import Builder, Filtration
from .errors import DataError, FormatError
from .metric import DistanceMatrix, PointCloud
from .persistence import PersistenceDiagram
from .statistics import ExperimentConfig, ExperimentResult, SpaceSpec

DIAGRAM_HEADER = "dim,birth,death"
RESULTS_HEADER = "n,mean_db,std_db"


def fmt(x) -> str:
    """Shortest round-trip decimal of a float; integers stay integers."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def _lines(text: str) -> List[str]:
    if not text:
        raise FormatError("empty file", line=1)
    if not text.endswith("\n"):
        raise FormatError("missing final newline (truncated file?)", line=text.count("\n") + 1)
    return text[:-1].split("\n")


def _float(tok: str, lineno: int, allow_inf: bool = False) -> float:
    tok = tok.strip()
    try:
        x = float(tok)
    except ValueError:
        raise FormatError(f"not a number: {tok!r}", line=lineno) from None
    if math.isnan(x) or (math.isinf(x) and not (allow_inf and x > 0)):
        raise FormatError(f"non-finite value {tok!r}", line=lineno)
    return x


def _int(tok: str, lineno: int) -> int:
    tok = tok.strip()
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"not an integer: {tok!r}", line=lineno) from None


def _read(path) -> str:
    return Path(path).read_text()


def _write(path, text: str) -> None:
    Path(path).write_text(text)


# --- point clouds ---------------------------------------------------------


def parse_point_cloud(text: str) -> PointCloud:
    lines = _lines(text)
    start = 1 if lines and lines[0].startswith("#") else 0
    rows = []
    for i, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            raise FormatError("empty line", line=i)
        row = [_float(t, i) for t in line.split(",")]
        if rows and len(row) != len(rows[0]):
            raise FormatError(f"expected {len(rows[0])} coordinates, got {len(row)}", line=i)
        rows.append(row)
    if not rows:
        raise FormatError("no points", line=start + 1)
    return PointCloud(np.array(rows))


def format_point_cloud(cloud: PointCloud, header: str = None) -> str:
    out = [f"# {header}"] if header else []
    out += [",".join(fmt(x) for x in row) for row in cloud.points.tolist()]
    return "\n".join(out) + "\n"


def read_point_cloud(path) -> PointCloud:
    return parse_point_cloud(_read(path))


def write_point_cloud(cloud: PointCloud, path, header: str = None) -> None:
    _write(path, format_point_cloud(cloud, header))


# --- lower-triangular distance matrices -----------------------------------


def parse_distance_matrix(text: str) -> DistanceMatrix:
    """Row i (i >= 1) lists d(i, 0), ..., d(i, i - 1).  The empty row of
    point 0 may be written as a blank first line."""
    lines = _lines(text)
    offset = 1 if not lines[0].strip() else 0
    n = len(lines) + 1 - offset
    D = np.zeros((n, n))
    for k, line in enumerate(lines[offset:], start=1):
        lineno = k + offset
        toks = line.split(",") if line.strip() else []
        if len(toks) != k:
            raise FormatError(f"row {k} needs {k} entries, got {len(toks)}", line=lineno)
        vals = [_float(t, lineno) for t in toks]
        if any(v < 0 for v in vals):
            raise FormatError("negative distance", line=lineno)
        D[k, :k] = vals
    D = D + D.T
    return DistanceMatrix(D)


def format_distance_matrix(dm: DistanceMatrix) -> str:
    E = dm.entries
    rows = [""] + [",".join(fmt(x) for x in E[i, :i].tolist()) for i in range(1, dm.n)]
    return "\n".join(rows) + "\n"


def read_distance_matrix(path) -> DistanceMatrix:
    return parse_distance_matrix(_read(path))


def write_distance_matrix(dm: DistanceMatrix, path) -> None:
    _write(path, format_distance_matrix(dm))


# --- filtrations ----------------------------------------------------------


def parse_filtration(text: str) -> Filtration:
    """One simplex per line: ``v0 v1 ... vk ; value``."""
    entries = []
    for i, line in enumerate(_lines(text), start=1):
        if ";" not in line:
            raise FormatError("expected 'v0 v1 ... vk ; value'", line=i)
        left, right = line.split(";", 1)
        verts = [_int(t, i) for t in left.split()]
        if not verts:
            raise FormatError("simplex without vertices", line=i)
        if any(v < 0 for v in verts):
            raise FormatError("negative vertex index", line=i)
        if any(b <= a for a, b in zip(verts, verts[1:])):
            raise FormatError("vertices must be strictly increasing", line=i)
        value = _float(right, i)
        if value < 0:
            raise FormatError("negative filtration value", line=i)
        entries.append((tuple(verts), value))
    seen = set()
    for i, (sx, _) in enumerate(entries, start=1):
        if sx in seen:
            raise FormatError(f"simplex {sx} listed twice", line=i)
        seen.add(sx)
    return Filtration.from_entries(entries, validate=True)


def format_filtration(f: Filtration) -> str:
    return "".join(f"{' '.join(map(str, sx))} ; {fmt(v)}\n" for sx, v in f)


def read_filtration(path) -> Filtration:
    return parse_filtration(_read(path))


def write_filtration(f: Filtration, path) -> None:
    _write(path, format_filtration(f))


# --- diagrams -------------------------------------------------------------


def parse_diagram(text: str) -> PersistenceDiagram:
    lines = _lines(text)
    if lines[0].strip() != DIAGRAM_HEADER:
        raise FormatError(f"expected header {DIAGRAM_HEADER!r}", line=1)
    pts = []
    for i, line in enumerate(lines[1:], start=2):
        toks = line.split(",")
        if len(toks) != 3:
            raise FormatError("expected 'dim,birth,death'", line=i)
        dim = _int(toks[0], i)
        if dim < 0:
            raise FormatError("negative dimension", line=i)
        birth = _float(toks[1], i)
        death = _float(toks[2], i, allow_inf=True)
        if death < birth:
            raise FormatError("death before birth", line=i)
        pts.append((dim, birth, death))
    return PersistenceDiagram(pts)


def format_diagram(d: PersistenceDiagram) -> str:
    rows = [DIAGRAM_HEADER]
    rows += [f"{int(k)},{fmt(b)},{fmt(e)}" for k, b, e in d.points.tolist()]
    return "\n".join(rows) + "\n"


def read_diagram(path) -> PersistenceDiagram:
    return parse_diagram(_read(path))


def write_diagram(d: PersistenceDiagram, path) -> None:
    _write(path, format_diagram(d))


# --- experiment configs ---------------------------------------------------

_SPACE_FIELDS = {"d": int, "alpha": float, "rho0": float, "D": int}
_CONFIG_ORDER = [
    "space.kind", "space.d", "space.alpha", "space.rho0", "space.D",
    "n_grid", "k", "seed",
    "builder.kind", "builder.threshold", "builder.maxdim",
    "homology_dim", "reference.kind", "reference.dense_n",
]


def parse_config(text: str) -> ExperimentConfig:
    """``key = value`` lines; blank lines and ``#`` comments are ignored."""
    kv, where = {}, {}
    for i, line in enumerate(_lines(text), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if "=" not in s:
            raise FormatError("expected 'key = value'", line=i)
        key, value = (t.strip() for t in s.split("=", 1))
        if key not in _CONFIG_ORDER:
            raise FormatError(f"unknown key {key!r}", line=i)
        if key in kv:
            raise FormatError(f"duplicate key {key!r}", line=i)
        kv[key], where[key] = value, i

    def need(key):
        if key not in kv:
            raise FormatError(f"missing key {key!r}")
        return kv[key]

    def conv(key, typ):
        tok = kv[key]
        return _int(tok, where[key]) if typ is int else _float(tok, where[key], allow_inf=True)

    try:
        params = {name: conv(f"space.{name}", typ) for name, typ in _SPACE_FIELDS.items() if f"space.{name}" in kv}
        space = SpaceSpec(need("space.kind"), **params)
        grid_line = where.get("n_grid")
        n_grid = tuple(_int(t, grid_line) for t in need("n_grid").split(","))
        need("k"), need("seed"), need("builder.kind"), need("homology_dim")
        builder = Builder(
            kv["builder.kind"],
            threshold=conv("builder.threshold", float) if "builder.threshold" in kv else math.inf,
            maxdim=conv("builder.maxdim", int) if "builder.maxdim" in kv else 1,
        )
        return ExperimentConfig(
            space=space,
            n_grid=n_grid,
            k=conv("k", int),
            seed=conv("seed", int),
            builder=builder,
            homology_dim=conv("homology_dim", int),
            reference=kv.get("reference.kind", "dense"),
            dense_n=conv("reference.dense_n", int) if "reference.dense_n" in kv else None,
        )
    except FormatError:
        raise
    except DataError as exc:
        raise FormatError(str(exc)) from exc


def format_config(cfg: ExperimentConfig) -> str:
    kv = {"space.kind": cfg.space.kind}
    for name, value in cfg.space.params().items():
        kv[f"space.{name}"] = fmt(value)
    kv["n_grid"] = ",".join(str(n) for n in cfg.n_grid)
    kv["k"] = str(cfg.k)
    kv["seed"] = str(cfg.seed)
    kv["builder.kind"] = cfg.builder.kind
    if cfg.builder.kind != "alpha2d":
        kv["builder.threshold"] = fmt(cfg.builder.threshold)
        kv["builder.maxdim"] = str(cfg.builder.maxdim)
    kv["homology_dim"] = str(cfg.homology_dim)
    kv["reference.kind"] = cfg.reference
    if cfg.dense_n is not None:
        kv["reference.dense_n"] = str(cfg.dense_n)
    return "".join(f"{k} = {kv[k]}\n" for k in _CONFIG_ORDER if k in kv)


def read_config(path) -> ExperimentConfig:
    return parse_config(_read(path))


def write_config(cfg: ExperimentConfig, path) -> None:
    _write(path, format_config(cfg))


# --- experiment results ---------------------------------------------------


def _stat(tok: str, lineno: int) -> float:
    # results may legitimately hold inf (essential mismatch) or nan (no fit)
    tok = tok.strip()
    if tok in ("inf", "nan"):
        return float(tok)
    return _float(tok, lineno)


def parse_results(text: str) -> ExperimentResult:
    lines = _lines(text)
    if lines[0].strip() != RESULTS_HEADER:
        raise FormatError(f"expected header {RESULTS_HEADER!r}", line=1)
    per_n, meta = [], {}
    for i, line in enumerate(lines[1:], start=2):
        if line.startswith("#"):
            for item in line[1:].split(","):
                if "=" not in item:
                    raise FormatError("expected '# key=value, ...'", line=i)
                key, value = (t.strip() for t in item.split("=", 1))
                meta[key] = _stat(value, i)
            continue
        if meta:
            raise FormatError("data row after the summary comments", line=i)
        toks = line.split(",")
        if len(toks) != 3:
            raise FormatError("expected 'n,mean_db,std_db'", line=i)
        per_n.append((_int(toks[0], i), _stat(toks[1], i), _stat(toks[2], i)))
    for key in ("slope", "intercept", "stderr"):
        if key not in meta:
            raise FormatError(f"missing summary field {key!r}", line=len(lines))
    return ExperimentResult(
        tuple(per_n), meta["slope"], meta["intercept"], meta["stderr"], meta.get("reference_bias", float("nan"))
    )


def format_results(r: ExperimentResult) -> str:
    rows = [RESULTS_HEADER]
    rows += [f"{n},{fmt(m)},{fmt(s)}" for n, m, s in r.per_n]
    rows.append(f"# slope={fmt(r.slope)}, intercept={fmt(r.intercept)}, stderr={fmt(r.slope_stderr)}")
    rows.append(f"# reference_bias={fmt(r.reference_bias)}")
    return "\n".join(rows) + "\n"


def read_results(path) -> ExperimentResult:
    return parse_results(_read(path))


def write_results(r: ExperimentResult, path) -> None:
    _write(path, format_results(r))
