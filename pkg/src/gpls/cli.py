"""Command-line front end.

Subcommands: sample, fit-variety, fit-sdf, curvature, eval, grid-export,
bench. Every command that uses randomness takes --seed and is deterministic
for a given seed. Exit codes: 0 success, 2 usage error, 3 data/format
error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import bench as bench_mod
from . import fileio
from .errors import DataFormatError, DomainError, NumericalError
from .geom import curvature_report, project_points
from .mindex import build_index_set
from .sdfit import build_band, fit_sdf
from .surfaces import CATALOG_NAMES, catalog_lookup, oracle_curvature, oracle_numeric, sample_surface
from .variety import DEFAULT_RANK_TOL, DomainTransform, build_gpls

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def parse_params(text: str) -> dict:
    """Parse 'a=0.8,b=0.9' style parameter lists."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise DomainError(f"bad parameter {item!r}; expected key=value")
        key, value = item.split("=", 1)
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise DomainError(f"parameter {key.strip()!r} has non-numeric value {value!r}") from None
    return out


def _parse_lp(text: str) -> float:
    if text in ("inf", "oo"):
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise DomainError(f"bad lp value {text!r}") from None
    if value not in (1.0, 2.0):
        raise DomainError("supported lp degrees are 1, 2 and inf")
    return value


def thread_count():
    """Thread cap from GPLS_THREADS, or None when unset (library default)."""
    raw = os.environ.get("GPLS_THREADS")
    if not raw:
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        return None


# -- subcommands -----------------------------------------------------------------


def cmd_sample(args) -> int:
    if args.n < 1:
        raise DomainError("--n must be at least 1")
    sdef = catalog_lookup(args.surface, parse_params(args.params))
    sample = sample_surface(sdef, args.n, seed=args.seed)
    comments = [
        f"surface={args.surface} params={args.params or '-'} n={args.n} seed={args.seed}",
    ]
    if sample.flagged.size:
        comments.append(f"flagged-normals (gradient too small): {sample.flagged.tolist()}")
    fileio.write_xyzn(args.out, sample.points, sample.normals, comments=comments)
    print(f"wrote {len(sample.points)} points to {args.out}")
    return EXIT_OK


def cmd_fit_variety(args) -> int:
    points, _ = fileio.read_points(args.points)
    index_set = build_index_set(3, args.degree, _parse_lp(args.lp))
    surface = build_gpls(points, index_set, mode=args.mode, rank_tol=args.rank_tol)
    fileio.save_surface(args.out, surface)
    print(
        f"fit rank={surface.rank} corank={surface.corank} "
        f"max_residual={surface.fit_report['max_residual']:.3e} -> {args.out}"
    )
    return EXIT_OK


def cmd_fit_sdf(args) -> int:
    points, normals = fileio.read_points(args.points)
    if normals is None:
        raise DataFormatError(f"{args.points}: signed-distance fitting requires normals (XYZN or PLY with nx,ny,nz)")
    offsets = [float(v) for v in args.offsets.split(",") if v.strip()] if args.offsets else []
    if not offsets:
        print("warning: no offsets given; regressing through surface points only", file=sys.stderr)
    transform = DomainTransform.auto(points)
    band = build_band(transform.to_domain(points), normals, offsets)
    index_set = build_index_set(3, args.degree, _parse_lp(args.lp))
    surface = fit_sdf(band, index_set, transform=transform, ridge=args.ridge)
    fileio.save_surface(args.out, surface)
    print(
        f"fit degree={args.degree} lp={args.lp} band={len(band)} "
        f"max_residual={surface.fit_report['max_residual']:.3e} -> {args.out}"
    )
    return EXIT_OK


def _oracle_callable(args):
    if not args.oracle:
        return None
    sdef = catalog_lookup(args.oracle, parse_params(args.oracle_params))
    if sdef.closed_form_oracle:
        def closed(points):
            k_mean, k_gauss = oracle_curvature(sdef, points)
            lap = oracle_numeric(sdef, points, "lap_mean") if args.laplacian else None
            return k_mean, k_gauss, lap
        return closed

    def numeric(points):
        k_mean = oracle_numeric(sdef, points, "mean")
        k_gauss = oracle_numeric(sdef, points, "gauss")
        lap = oracle_numeric(sdef, points, "lap_mean") if args.laplacian else None
        return k_mean, k_gauss, lap

    return numeric


def cmd_curvature(args) -> int:
    surface = fileio.load_surface(args.surface)
    points, _ = fileio.read_points(args.points)
    report = curvature_report(
        surface, points, oracle=_oracle_callable(args), laplacian=args.laplacian
    )
    csv_path = args.out + ".csv"
    json_path = args.out + ".json"
    fileio.write_curvature_csv(csv_path, report)
    fileio.write_curvature_summary(json_path, report)
    print(f"wrote {csv_path} and {json_path}: {json.dumps(report.summary())}")
    return EXIT_OK


def cmd_eval(args) -> int:
    surface = fileio.load_surface(args.surface)
    points, _ = fileio.read_points(args.points)
    if len(points) == 0:
        raise DomainError("point file contains no points")
    _, dist, converged = project_points(surface, points)
    if not converged.all():
        raise NumericalError(
            f"projection failed for {int((~converged).sum())} of {len(points)} points"
        )
    payload = {
        "n_points": int(len(points)),
        "e_inf": float(dist.max()),
        "e_mean": float(dist.mean()),
    }
    with open(args.out, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=1)
        handle.write("\n")
    print(json.dumps(payload))
    return EXIT_OK


def cmd_grid_export(args) -> int:
    if args.res < 2:
        raise DomainError("--res must be at least 2")
    surface = fileio.load_surface(args.surface)
    fileio.write_vtk_scalar_grid(args.out, surface, args.res)
    print(f"wrote {args.res}^3 field to {args.out}")
    return EXIT_OK


def cmd_bench(args) -> int:
    points = normals = None
    if args.external_data:
        if args.table != "sweep":
            raise DomainError("--external-data applies to the sweep table only")
        points, normals = fileio.read_points(args.external_data)
        if normals is None:
            raise DataFormatError(f"{args.external_data}: external sweep data requires normals")
    rows = bench_mod.run_table(args.table, seed=args.seed, points=points, normals=normals)
    fileio.write_bench_csv(args.out, rows)
    gated = [r for r in rows if r.get("pass") is not None]
    failed = [r for r in gated if not r["pass"]]
    for row in rows:
        status = "----" if row.get("pass") is None else ("PASS" if row["pass"] else "FAIL")
        print(
            f"[{status}] {row['surface']:<10} {row['metric']:<12} "
            f"measured={row['measured']:.3e} tolerance={row['tolerance'] or '-'}"
        )
    print(f"bench table {args.table}: {len(gated) - len(failed)}/{len(gated)} gated rows pass")
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpls",
        description="Polynomial level-set surface fitting and curvature analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample points on a catalog surface")
    p.add_argument("--surface", required=True, help=f"one of {', '.join(CATALOG_NAMES)}")
    p.add_argument("--params", default="", help="comma list, e.g. R=0.5,r=0.3")
    p.add_argument("--n", type=int, required=True, help="number of points")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("fit-variety", help="fit a level set through exact surface points")
    p.add_argument("--points", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--lp", default="2")
    p.add_argument("--mode", default="kernel-corank1", choices=["kernel-corank1", "lagrange-sum"])
    p.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit_variety)

    p = sub.add_parser("fit-sdf", help="fit a level set through a signed-distance band")
    p.add_argument("--points", required=True, help="XYZN or PLY with normals")
    p.add_argument("--offsets", default="0.005,0.01,0.035", help="comma list of band offsets")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--lp", default="2")
    p.add_argument("--ridge", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit_sdf)

    p = sub.add_parser("curvature", help="curvature report at points on a fitted surface")
    p.add_argument("--surface", required=True, help="surface JSON from a fit command")
    p.add_argument("--points", required=True)
    p.add_argument("--oracle", default="", help="catalog surface for ground truth")
    p.add_argument("--oracle-params", default="")
    p.add_argument("--laplacian", action="store_true")
    p.add_argument("--out", required=True, help="basename; writes .csv and .json")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("eval", help="distance report of points against a fitted surface")
    p.add_argument("--surface", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid-export", help="write the level-set field as legacy VTK")
    p.add_argument("--surface", required=True)
    p.add_argument("--res", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_grid_export)

    p = sub.add_parser("bench", help="run a benchmark table")
    p.add_argument("--table", required=True, choices=["1", "2", "3", "sweep"])
    p.add_argument("--seed", type=int, default=1)
    p.add_argument(
        "--external-data",
        default="",
        help="scan dataset with normals for the sweep table (subsampled to 4000 points)",
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    cap = thread_count()
    if cap is not None:
        # GPLS_THREADS caps the BLAS/LAPACK pools driving all batch numerics
        try:
            from threadpoolctl import threadpool_limits

            with threadpool_limits(limits=cap):
                return _dispatch(args)
        except ImportError:
            pass
    return _dispatch(args)


def _dispatch(args) -> int:
    try:
        return args.func(args)
    except DataFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
