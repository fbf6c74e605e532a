"""Level-set fitting for non-algebraic surfaces via relaxed signed distances.

Point clouds on a smooth surface that is not itself algebraic do not split
the collocation matrix sharply into kernel and co-kernel, so instead of
extracting a vanishing polynomial we regress one: each surface point is
moved by +/- lambda along its normal to form a narrow band of off-surface
points carrying their signed offsets as distance values, and a polynomial
approximating that relaxed signed distance is obtained by least squares.
Its zero set is the surface estimate, and its gradient is nonvanishing
there by construction (checked at the samples).

Band construction and fitting operate in domain (cube) coordinates; a
recorded transform maps results back to user units.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lstsq

from .errors import DegenerateGradientError, DomainError
from .mindex import MultiIndexSet
from .nodes import build_grid
from .poly import Polynomial, differentiate, evaluate, to_canonical
from .variety import DomainTransform, GplsSurface, assemble_vandermonde

__all__ = [
    "NarrowBand",
    "build_band",
    "fit_sdf",
    "regress_on_surface",
    "regression_errors",
    "estimate_normals",
]


@dataclass
class NarrowBand:
    """Surface samples plus signed offset shells on both sides.

    ``off_points[i]`` equals some surface point moved by ``off_values[i]``
    along its unit normal; on-surface points carry distance zero. Band
    points that left the unit cube were dropped; ``n_dropped`` counts them.
    """

    on_points: np.ndarray
    normals: np.ndarray
    off_points: np.ndarray
    off_values: np.ndarray
    offsets_used: tuple
    n_dropped: int = 0

    @property
    def all_points(self) -> np.ndarray:
        if self.off_points.size == 0:
            return self.on_points
        return np.vstack([self.on_points, self.off_points])

    @property
    def all_values(self) -> np.ndarray:
        return np.concatenate([np.zeros(len(self.on_points)), self.off_values])

    def __len__(self) -> int:
        return len(self.on_points) + len(self.off_points)


def build_band(points, normals, offsets) -> NarrowBand:
    """Offset shells q +/- lambda * eta(q) for every offset lambda.

    Inputs are domain-coordinate surface points with their (nonzero)
    normals; normals are renormalized to unit length. The +lambda shell
    carries distance +lambda, the mirror shell -lambda. Shell points
    escaping the cube are dropped and counted. An empty offset list gives a
    band of surface points only (all distances zero).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    nrm = np.atleast_2d(np.asarray(normals, dtype=float))
    if nrm.shape != pts.shape:
        raise DomainError(f"normals shape {nrm.shape} does not match points {pts.shape}")
    offsets = tuple(float(v) for v in offsets)
    if any(v <= 0 for v in offsets):
        raise DomainError("offsets must be positive")
    norms = np.linalg.norm(nrm, axis=1)
    zero = np.nonzero(norms < 1e-12)[0]
    if zero.size:
        raise DomainError(f"zero-length normal at point index(es) {zero.tolist()}")
    unit = nrm / norms[:, None]
    shells, values = [], []
    for lam in offsets:
        shells.append(pts + lam * unit)
        values.append(np.full(len(pts), lam))
        shells.append(pts - lam * unit)
        values.append(np.full(len(pts), -lam))
    if shells:
        off = np.vstack(shells)
        val = np.concatenate(values)
        inside = np.all(np.abs(off) <= 1.0, axis=1)
        dropped = int((~inside).sum())
        off, val = off[inside], val[inside]
    else:
        off = np.zeros((0, pts.shape[1]))
        val = np.zeros(0)
        dropped = 0
    return NarrowBand(
        on_points=pts,
        normals=unit,
        off_points=off,
        off_values=val,
        offsets_used=offsets,
        n_dropped=dropped,
    )


def fit_sdf(
    band: NarrowBand,
    index_set: MultiIndexSet,
    transform: DomainTransform | None = None,
    ridge: float = 0.0,
) -> GplsSurface:
    """Least-squares polynomial through the band's signed distances.

    Solves min_c |R c - d|_2 over the extended collocation matrix of band
    points (plain least squares by default; ``ridge`` adds an optional
    Tikhonov term for noisy scans). The zero set of the resulting
    polynomial is the surface estimate. Raises DegenerateGradientError if
    the fitted gradient vanishes at any on-surface sample. ``transform`` is
    recorded on the result for later unit corrections; the band itself must
    already be in domain coordinates.
    """
    if len(band) == 0:
        raise DomainError("band is empty")
    if len(band) < len(index_set):
        warnings.warn(
            f"band has {len(band)} points for {len(index_set)} basis functions; "
            "the regression is underdetermined",
            stacklevel=2,
        )
    grid = build_grid(index_set)
    entries = assemble_vandermonde(grid, band.all_points).entries
    values = band.all_values
    if ridge > 0.0:
        gram = entries.T @ entries + ridge * np.eye(entries.shape[1])
        coeffs = np.linalg.solve(gram, entries.T @ values)
        rank = entries.shape[1]
    else:
        coeffs, _, rank, _ = lstsq(entries, values, lapack_driver="gelsy")
    q = to_canonical(Polynomial(index_set, "lagrange", coeffs, grid=grid))

    grads = np.stack(
        [evaluate(differentiate(q, i), band.on_points) for i in range(q.m)], axis=-1
    )
    grad_norms = np.linalg.norm(grads, axis=1)
    degen_tol = 1e-10 * max(1.0, float(np.abs(q.coefficients).max()))
    dead = np.nonzero(grad_norms < degen_tol)[0]
    if dead.size:
        shown = dead[:8].tolist()
        more = f" (+{dead.size - len(shown)} more)" if dead.size > len(shown) else ""
        raise DegenerateGradientError(
            f"fitted gradient vanishes at on-surface point(s) {shown}{more}; "
            "an all-zero distance target (e.g. empty offsets) cannot define a level set"
        )
    residual = entries @ coeffs - values
    report = {
        "mode": "sdf",
        "rank_tol": None,
        "max_residual": float(np.abs(residual).max()),
        "residual_rms": float(np.sqrt(np.mean(residual**2))),
        "corank": len(index_set) - int(rank),
        "offsets": list(band.offsets_used),
        "n_band_points": len(band),
        "n_dropped": band.n_dropped,
        "ridge": ridge,
    }
    return GplsSurface(
        q,
        kernel_basis=[],
        rank=int(rank),
        anchor_indices=[],
        transform=transform or DomainTransform.identity(q.m),
        fit_report=report,
        grid=grid,
    )


def regress_on_surface(
    surface: GplsSurface, points, values, index_set: MultiIndexSet
) -> Polynomial:
    """Least-squares polynomial through scalar samples on a fitted surface.

    Points are user coordinates near the surface's zero set; the returned
    polynomial (grid Lagrange basis) lives over domain coordinates, so
    evaluate it at transform.to_domain(x) or through regression_errors.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    vals = np.asarray(values, dtype=float)
    if len(pts) < 1:
        raise DomainError("at least one sample point is required")
    if vals.shape != (len(pts),):
        raise DomainError(f"expected {len(pts)} values, got shape {vals.shape}")
    grid = build_grid(index_set)
    entries = assemble_vandermonde(grid, surface.transform.to_domain(pts)).entries
    coeffs, _, _, _ = lstsq(entries, vals, lapack_driver="gelsy")
    return Polynomial(index_set, "lagrange", coeffs, grid=grid)


def regression_errors(surface: GplsSurface, poly: Polynomial, points, values) -> dict:
    """Held-out error report: max and mean absolute prediction error."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    vals = np.asarray(values, dtype=float)
    pred = evaluate(poly, surface.transform.to_domain(pts))
    err = np.abs(pred - vals)
    return {"max_error": float(err.max()), "mean_error": float(err.mean()), "n_points": len(pts)}


def estimate_normals(points, k: int = 16) -> np.ndarray:
    """Per-point normals from local plane fits over k nearest neighbors.

    The smallest-covariance eigenvector of each neighborhood, oriented away
    from the cloud centroid. A fallback for inputs without normals; results
    should be flagged as estimated wherever they are reported.
    """
    from scipy.spatial import cKDTree

    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if len(pts) < 3:
        raise DomainError("normal estimation needs at least 3 points")
    k = min(int(k), len(pts) - 1)
    tree = cKDTree(pts)
    _, nbrs = tree.query(pts, k + 1)
    centroid = pts.mean(axis=0)
    normals = np.empty_like(pts)
    for i, row in enumerate(nbrs):
        block = pts[row] - pts[row].mean(axis=0)
        _, _, vt = np.linalg.svd(block, full_matrices=False)
        n = vt[-1]
        if np.dot(n, pts[i] - centroid) < 0:
            n = -n
        normals[i] = n
    return normals
