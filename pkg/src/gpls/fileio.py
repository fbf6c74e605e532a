"""File formats: point clouds, polynomial/surface JSON, curvature CSV,
legacy-VTK structured points, and benchmark CSV.

All numeric text is written with shortest round-trip decimal formatting, so
rereading a file reproduces the binary64 values bit for bit, and writes go
through a temp-file rename to stay atomic.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .errors import DataFormatError, DomainError
from .mindex import build_index_set
from .nodes import UnisolventGrid
from .poly import Polynomial, evaluate
from .variety import DomainTransform, GplsSurface

__all__ = [
    "read_points",
    "write_xyzn",
    "polynomial_to_dict",
    "polynomial_from_dict",
    "save_polynomial",
    "load_polynomial",
    "surface_to_dict",
    "surface_from_dict",
    "save_surface",
    "load_surface",
    "write_curvature_csv",
    "write_curvature_summary",
    "write_vtk_scalar_grid",
    "write_bench_csv",
    "BENCH_CSV_HEADER",
]

BENCH_CSV_HEADER = "surface,params,N,degree,lp,metric,measured,paper_value,tolerance,pass"


def _fmt(v) -> str:
    return repr(float(v))


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- point clouds -----------------------------------------------------------------


def read_points(path: str):
    """Read a point cloud; returns (points, normals or None).

    Accepts whitespace-delimited text with 3 (x y z) or 6 (x y z nx ny nz)
    columns and '#' comment lines, or ASCII PLY with vertex properties
    x, y, z and optionally nx, ny, nz.
    """
    with open(path, "r", encoding="utf-8") as handle:
        raw = handle.read()
    stripped = raw.lstrip()
    if stripped[:3].lower() == "ply":
        return _parse_ply(raw, path)
    return _parse_xyz(raw, path)


def _parse_xyz(raw: str, path: str):
    rows = []
    width = None
    for lineno, line in enumerate(raw.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        fields = body.split()
        if width is None:
            width = len(fields)
            if width not in (3, 6):
                raise DataFormatError(
                    f"{path}:{lineno}: expected 3 or 6 columns, found {width}"
                )
        elif len(fields) != width:
            raise DataFormatError(
                f"{path}:{lineno}: inconsistent column count ({len(fields)} vs {width})"
            )
        try:
            rows.append([float(v) for v in fields])
        except ValueError as exc:
            raise DataFormatError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    data = np.array(rows)
    if width == 3:
        return data, None
    return data[:, :3], data[:, 3:]


def _parse_ply(raw: str, path: str):
    lines = raw.splitlines()
    if not lines or lines[0].strip().lower() != "ply":
        raise DataFormatError(f"{path}: not a PLY file")
    n_vertices = None
    props: list[str] = []
    in_vertex_element = False
    body_start = None
    for i, line in enumerate(lines[1:], start=1):
        fields = line.split()
        if not fields:
            continue
        key = fields[0]
        if key == "format":
            if fields[1] != "ascii":
                raise DataFormatError(f"{path}: only ASCII PLY is supported")
        elif key == "element":
            in_vertex_element = fields[1] == "vertex"
            if in_vertex_element:
                n_vertices = int(fields[2])
        elif key == "property" and in_vertex_element:
            props.append(fields[-1])
        elif key == "end_header":
            body_start = i + 1
            break
    if body_start is None or n_vertices is None:
        raise DataFormatError(f"{path}: missing vertex element or end_header")
    for name in ("x", "y", "z"):
        if name not in props:
            raise DataFormatError(f"{path}: vertex element lacks property {name!r}")
    rows = []
    for line in lines[body_start:]:
        body = line.strip()
        if not body:
            continue
        rows.append([float(v) for v in body.split()])
        if len(rows) == n_vertices:
            break
    if len(rows) != n_vertices:
        raise DataFormatError(f"{path}: expected {n_vertices} vertices, found {len(rows)}")
    data = np.array(rows)
    if data.shape[1] < len(props):
        raise DataFormatError(f"{path}: vertex rows shorter than the property list")
    cols = {name: data[:, i] for i, name in enumerate(props)}
    points = np.column_stack([cols["x"], cols["y"], cols["z"]])
    if all(n in cols for n in ("nx", "ny", "nz")):
        normals = np.column_stack([cols["nx"], cols["ny"], cols["nz"]])
        return points, normals
    return points, None


def write_xyzn(path: str, points, normals=None, comments=()):
    """Write a point cloud as whitespace-delimited text (x y z [nx ny nz])."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    lines = [f"# {c}" for c in comments]
    if normals is None:
        lines += [" ".join(_fmt(v) for v in row) for row in pts]
    else:
        nrm = np.atleast_2d(np.asarray(normals, dtype=float))
        if nrm.shape != pts.shape:
            raise DomainError("normals shape mismatch")
        lines += [
            " ".join(_fmt(v) for v in row) + " " + " ".join(_fmt(v) for v in nrow)
            for row, nrow in zip(pts, nrm)
        ]
    _atomic_write(path, "\n".join(lines) + "\n")


# -- polynomial / surface records ---------------------------------------------------


def _p_to_json(p: float):
    if math.isinf(p):
        return "inf"
    return int(p) if float(p).is_integer() else float(p)


def _p_from_json(value) -> float:
    if value == "inf":
        return math.inf
    return float(value)


def polynomial_to_dict(poly: Polynomial) -> dict:
    record = {
        "m": poly.index_set.m,
        "n": poly.index_set.n,
        "p": _p_to_json(poly.index_set.p),
        "basis": poly.basis,
        "index_set": poly.index_set.indices.tolist(),
        "coefficients": [float(c) for c in poly.coefficients],
    }
    if poly.grid is not None:
        record["generating_points"] = [
            [float(v) for v in gp] for gp in poly.grid.generating_points
        ]
    return record


def polynomial_from_dict(record: dict) -> Polynomial:
    try:
        index_set = build_index_set(record["m"], record["n"], _p_from_json(record["p"]))
        stored = np.asarray(record["index_set"], dtype=np.int64)
        if not np.array_equal(stored, index_set.indices):
            raise DataFormatError("stored index set disagrees with (m, n, p)")
        basis = record["basis"]
        coeffs = np.asarray(record["coefficients"], dtype=float)
        grid = None
        if basis in ("newton", "lagrange"):
            gps = record.get("generating_points")
            if gps is None:
                raise DataFormatError(f"{basis} polynomial record lacks generating_points")
            grid = UnisolventGrid(index_set, [np.asarray(g, dtype=float) for g in gps])
        return Polynomial(index_set, basis, coeffs, grid=grid)
    except DataFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"bad polynomial record: {exc}") from None


def save_polynomial(path: str, poly: Polynomial):
    _atomic_write(path, json.dumps(polynomial_to_dict(poly), indent=1) + "\n")


def load_polynomial(path: str) -> Polynomial:
    with open(path, "r", encoding="utf-8") as handle:
        return polynomial_from_dict(json.load(handle))


def surface_to_dict(surface: GplsSurface) -> dict:
    return {
        "format": "gpls-surface",
        "version": 1,
        "polynomial": polynomial_to_dict(surface.q),
        "rank": int(surface.rank),
        "corank": int(surface.corank),
        "anchor_indices": [int(i) for i in surface.anchor_indices],
        "transform": {
            "scale": float(surface.transform.scale),
            "translation": [float(v) for v in surface.transform.translation],
        },
        "fit_report": surface.fit_report,
    }


def surface_from_dict(record: dict) -> GplsSurface:
    try:
        if record.get("format") != "gpls-surface":
            raise DataFormatError("not a surface record")
        poly = polynomial_from_dict(record["polynomial"])
        tr = record["transform"]
        transform = DomainTransform(float(tr["scale"]), np.asarray(tr["translation"], float))
        return GplsSurface(
            poly,
            kernel_basis=[],
            rank=int(record["rank"]),
            anchor_indices=np.asarray(record.get("anchor_indices", []), dtype=int),
            transform=transform,
            fit_report=dict(record.get("fit_report", {})),
        )
    except DataFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"bad surface record: {exc}") from None


def save_surface(path: str, surface: GplsSurface):
    _atomic_write(path, json.dumps(surface_to_dict(surface), indent=1) + "\n")


def load_surface(path: str) -> GplsSurface:
    with open(path, "r", encoding="utf-8") as handle:
        return surface_from_dict(json.load(handle))


# -- curvature reports ---------------------------------------------------------------


def write_curvature_csv(path: str, report):
    """Per-point curvature CSV: x,y,z,grad_norm,k_mean,k_gauss with optional
    lap_k_mean and oracle/error columns."""
    header = ["x", "y", "z", "grad_norm", "k_mean", "k_gauss"]
    columns = [
        report.points[:, 0],
        report.points[:, 1],
        report.points[:, 2],
        report.grad_norms,
        report.k_mean,
        report.k_gauss,
    ]
    if report.lap_k_mean is not None:
        header.append("lap_k_mean")
        columns.append(report.lap_k_mean)
    if report.oracle_k_mean is not None:
        header += ["oracle_k_mean", "err_k_mean"]
        measured = np.abs(report.k_mean) if report.compare_absolute_mean else report.k_mean
        target = (
            np.abs(report.oracle_k_mean)
            if report.compare_absolute_mean
            else report.oracle_k_mean
        )
        columns += [report.oracle_k_mean, np.abs(measured - target)]
    if report.oracle_k_gauss is not None:
        header += ["oracle_k_gauss", "err_k_gauss"]
        columns += [report.oracle_k_gauss, np.abs(report.k_gauss - report.oracle_k_gauss)]
    if report.oracle_lap_k_mean is not None and report.lap_k_mean is not None:
        header += ["oracle_lap_k_mean", "err_lap_k_mean"]
        columns += [
            report.oracle_lap_k_mean,
            np.abs(report.lap_k_mean - report.oracle_lap_k_mean),
        ]
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_curvature_summary(path: str, report):
    _atomic_write(path, json.dumps(report.summary(), indent=1) + "\n")


# -- field export ---------------------------------------------------------------------


def write_vtk_scalar_grid(path: str, surface: GplsSurface, res: int, name: str = "level_set"):
    """Evaluate the level-set polynomial on a res^3 regular grid over the
    cube and write legacy-VTK STRUCTURED_POINTS ASCII (x fastest)."""
    if res < 2:
        raise DomainError("grid resolution must be at least 2")
    axis = np.linspace(-1.0, 1.0, res)
    gx, gy, gz = np.meshgrid(axis, axis, axis, indexing="ij")
    pts = np.column_stack([gx.ravel(order="F"), gy.ravel(order="F"), gz.ravel(order="F")])
    values = evaluate(surface.q, pts)
    spacing = 2.0 / (res - 1)
    lines = [
        "# vtk DataFile Version 3.0",
        "level-set scalar field",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {res} {res} {res}",
        "ORIGIN -1 -1 -1",
        f"SPACING {_fmt(spacing)} {_fmt(spacing)} {_fmt(spacing)}",
        f"POINT_DATA {res**3}",
        f"SCALARS {name} double 1",
        "LOOKUP_TABLE default",
    ]
    lines += [_fmt(v) for v in values]
    _atomic_write(path, "\n".join(lines) + "\n")


# -- benchmark CSV ----------------------------------------------------------------------


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def write_bench_csv(path: str, rows):
    """Benchmark rows under the fixed schema (see BENCH_CSV_HEADER)."""
    lines = [BENCH_CSV_HEADER]
    keys = BENCH_CSV_HEADER.split(",")
    for row in rows:
        lines.append(",".join(_csv_cell(row.get(k)) for k in keys))
    _atomic_write(path, "\n".join(lines) + "\n")
