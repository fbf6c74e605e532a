"""Benchmark surface catalog, seeded surface sampling, and curvature oracles.

The catalog holds the five classic closed algebraic test surfaces with
their exact canonical implicit polynomials, expanded term by term from the
defining formulas. Ellipsoids and tori additionally carry closed-form
curvature oracles; the others get ground truth through the same analytic
curvature machinery applied to the exact implicit polynomial (rather than
the fitted one), cross-validated by intrinsic finite differences on the
axisymmetric cases. A star-shaped trigonometric surface stands in for
scanned datasets as the non-algebraic test case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SamplingError, UnsupportedOracleError
from .geom import (
    jet_of,
    laplacian_mean_curvature,
    gauss_curvature,
    mean_curvature,
    project_points,
)
from .mindex import build_index_set
from .poly import Polynomial, canonical_polynomial, evaluate
from .variety import GplsSurface

__all__ = [
    "SurfaceDef",
    "SurfaceSample",
    "catalog_lookup",
    "sample_surface",
    "oracle_curvature",
    "oracle_numeric",
    "oracle_lap_mean_fd",
    "sample_synthetic",
    "synthetic_point",
    "CATALOG_NAMES",
]

CATALOG_NAMES = ("ellipsoid", "biconcave", "torus", "genus2", "klein")


@dataclass
class SurfaceDef:
    """One catalog surface: exact implicit polynomial plus metadata.

    ``degree``/``lp`` give the recommended index-set parameters (the
    smallest Euclidean-degree ball containing every monomial of the
    implicit polynomial, which is what makes corank-1 fits possible).
    """

    name: str
    params: dict
    polynomial: Polynomial
    degree: int
    lp: float
    orientable: bool
    closed_form_oracle: bool
    axis_symmetric: bool = False
    _surface: GplsSurface | None = field(default=None, repr=False)

    def as_surface(self) -> GplsSurface:
        """The exact polynomial wrapped as a (identity-transform) surface."""
        if self._surface is None:
            self._surface = GplsSurface.from_polynomial(self.polynomial)
        return self._surface


def _mono(alpha, c=1.0) -> Polynomial:
    return canonical_polynomial(3, {alpha: c}, p=2)


def _embedded(poly: Polynomial, n: int) -> Polynomial:
    """Re-lay coefficients on the recommended ball A_{3,n,2}."""
    target = build_index_set(3, n, 2)
    coeffs = np.zeros(len(target))
    for alpha, c in zip(poly.index_set, poly.coefficients):
        if c != 0.0:
            coeffs[target.position(alpha)] = c
    return Polynomial(target, "canonical", coeffs)


def catalog_lookup(name: str, params: dict | None = None) -> SurfaceDef:
    """Catalog surface by name with validated parameters.

    ellipsoid(a, b, c), biconcave(d, c), torus(R, r), genus2, klein.
    """
    params = dict(params or {})
    x, y, z = _mono((1, 0, 0)), _mono((0, 1, 0)), _mono((0, 0, 1))
    if name == "ellipsoid":
        a = float(params.pop("a", 1.0))
        b = float(params.pop("b", 1.0))
        c = float(params.pop("c", 1.0))
        _reject_extras(name, params)
        if min(a, b, c) <= 0:
            raise DomainError("ellipsoid requires a > 0, b > 0, c > 0")
        q = x * x * (1.0 / a**2) + y * y * (1.0 / b**2) + z * z * (1.0 / c**2) - 1.0
        return SurfaceDef(
            name, {"a": a, "b": b, "c": c}, _embedded(q, 2), 2, 2,
            orientable=True, closed_form_oracle=True, axis_symmetric=(a == b),
        )
    if name == "biconcave":
        d = float(params.pop("d", 0.5))
        c = float(params.pop("c", 0.375))
        _reject_extras(name, params)
        if not 0 < c < d:
            raise DomainError("biconcave disc requires 0 < c < d")
        s2 = x * x + y * y + z * z
        q = (s2 + d * d) ** 3 - (y * y + z * z) * (8.0 * d * d) - c**4
        return SurfaceDef(
            name, {"d": d, "c": c}, _embedded(q, 6), 6, 2,
            orientable=True, closed_form_oracle=False,
        )
    if name == "torus":
        big_r = float(params.pop("R", 0.5))
        small_r = float(params.pop("r", 0.3))
        _reject_extras(name, params)
        if not 0 < small_r < big_r:
            raise DomainError("torus requires 0 < r < R")
        w = x * x + y * y + z * z + (big_r**2 - small_r**2)
        q = w * w - (x * x + y * y) * (4.0 * big_r**2)
        return SurfaceDef(
            name, {"R": big_r, "r": small_r}, _embedded(q, 4), 4, 2,
            orientable=True, closed_form_oracle=True, axis_symmetric=True,
        )
    if name == "genus2":
        _reject_extras(name, params)
        one = _mono((0, 0, 0))
        q = (
            (y * 2.0) * (y * y - x * x * 3.0) * (one - z * z)
            + (x * x + y * y) ** 2
            - (z * z * 9.0 - 1.0) * (one - z * z)
        )
        return SurfaceDef(
            name, {}, _embedded(q, 4), 4, 2, orientable=True, closed_form_oracle=False,
        )
    if name == "klein":
        _reject_extras(name, params)
        s2 = x * x + y * y + z * z
        inner = s2 - y * 2.0 - 1.0
        q = (s2 + y * 2.0 - 1.0) * (inner * inner - z * z * 8.0) + (x * z) * 16.0 * inner
        return SurfaceDef(
            name, {}, _embedded(q, 6), 6, 2, orientable=False, closed_form_oracle=False,
        )
    raise DomainError(f"unknown surface {name!r}; available: {', '.join(CATALOG_NAMES)}")


def _reject_extras(name: str, params: dict):
    if params:
        raise DomainError(f"unknown parameter(s) for {name}: {', '.join(sorted(params))}")


# -- sampling -------------------------------------------------------------------


@dataclass
class SurfaceSample:
    """Points on a surface with unit normals; rows whose gradient was too
    small for a normal are zeroed and listed in ``flagged``."""

    points: np.ndarray
    normals: np.ndarray
    flagged: np.ndarray


def sample_surface(sdef: SurfaceDef, count: int, seed: int = 0) -> SurfaceSample:
    """Seeded random points on a catalog surface.

    Uniform draws in the cube are projected onto the exact implicit
    polynomial's zero set along its gradient; draws that fail to converge
    or land outside the cube are rejected, so the result is deterministic
    per (surface, count, seed). Residuals satisfy |implicit| <= 1e-13 times
    the coefficient scale.
    """
    if count < 1:
        raise DomainError("sample count must be at least 1")
    rng = np.random.default_rng(seed)
    surface = sdef.as_surface()
    jet = jet_of(surface)
    grad_polys = jet.gradient_polys()
    points = []
    rounds = 0
    while sum(len(p) for p in points) < count:
        if rounds >= 100:
            raise SamplingError(
                f"could not draw {count} surface points within {100 * count} attempts"
            )
        rounds += 1
        draws = rng.uniform(-1.0, 1.0, size=(count, 3))
        projected, _, converged = project_points(surface, draws)
        inside = np.all(np.abs(projected) <= 1.0 + 1e-12, axis=1)
        points.append(projected[converged & inside])
    pts = np.vstack(points)[:count]
    grads = np.stack([evaluate(g, pts) for g in grad_polys], axis=-1)
    norms = np.linalg.norm(grads, axis=1)
    good = norms >= jet.degeneracy_threshold
    normals = np.zeros_like(grads)
    normals[good] = grads[good] / norms[good, None]
    return SurfaceSample(points=pts, normals=normals, flagged=np.nonzero(~good)[0])


# -- closed-form oracles ---------------------------------------------------------


def oracle_curvature(sdef: SurfaceDef, x):
    """Closed-form (mean, Gauss) curvature for ellipsoids and tori.

    The ellipsoid mean curvature is unsigned (absolute value built into the
    formula); the toric mean curvature is signed in the inward convention.
    Compare against fitted values through absolute values. Raises
    UnsupportedOracleError for other surfaces.
    """
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    pts = np.atleast_2d(arr)
    if sdef.name == "ellipsoid":
        a, b, c = sdef.params["a"], sdef.params["b"], sdef.params["c"]
        xs, ys, zs = pts[:, 0], pts[:, 1], pts[:, 2]
        w = xs**2 / a**4 + ys**2 / b**4 + zs**2 / c**4
        k_mean = np.abs(xs**2 + ys**2 + zs**2 - a**2 - b**2 - c**2) / (
            2.0 * (a * b * c) ** 2 * w**1.5
        )
        k_gauss = 1.0 / ((a * b * c) ** 2 * w**2)
    elif sdef.name == "torus":
        big_r, small_r = sdef.params["R"], sdef.params["r"]
        rho = np.hypot(pts[:, 0], pts[:, 1])
        cos_t = (rho - big_r) / small_r
        k_mean = (big_r + 2.0 * small_r * cos_t) / (2.0 * small_r * (big_r + small_r * cos_t))
        k_gauss = cos_t / (small_r * (big_r + small_r * cos_t))
    else:
        raise UnsupportedOracleError(
            f"no closed-form curvature oracle for {sdef.name!r}; "
            "use oracle_numeric for orientable catalog surfaces"
        )
    if single:
        return float(k_mean[0]), float(k_gauss[0])
    return k_mean, k_gauss


def oracle_numeric(sdef: SurfaceDef, x, quantity: str):
    """Ground-truth curvature from the exact implicit polynomial.

    Applies the analytic curvature machinery to the catalog polynomial
    itself (not a fit), so it is an independent reference for fitted
    surfaces. ``quantity`` is one of 'mean', 'gauss', 'lap_mean'. Mean
    curvature and its Laplacian are signed with the catalog polynomial's
    gradient orientation.
    """
    if not sdef.orientable:
        raise UnsupportedOracleError(
            f"{sdef.name!r} is not orientable; curvature oracles are undefined"
        )
    jet = jet_of(sdef.as_surface())
    if quantity == "mean":
        return mean_curvature(jet, x)
    if quantity == "gauss":
        return gauss_curvature(jet, x)
    if quantity == "lap_mean":
        return laplacian_mean_curvature(jet, x)
    raise DomainError(f"unknown quantity {quantity!r}; expected mean, gauss, lap_mean")


def _fd_second(f, t: np.ndarray, h: float):
    # 4th-order central differences for f' and f'' on a vector of parameters
    fm2, fm1, fp1, fp2 = f(t - 2 * h), f(t - h), f(t + h), f(t + 2 * h)
    f0 = f(t)
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    return d1, d2


def oracle_lap_mean_fd(sdef: SurfaceDef, x, h: float = 1e-3):
    """|surface Laplacian of mean curvature| by 1D intrinsic finite differences.

    Valid for axisymmetric catalog surfaces (tori and a == b ellipsoids):
    the operator reduces to (f'' + (rho'/rho) f') / metric along the profile
    parameter, applied to the closed-form unsigned mean curvature. Returned
    unsigned; use for cross-validation against |oracle_numeric(lap_mean)|.
    """
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    pts = np.atleast_2d(arr)
    if sdef.name == "torus":
        big_r, small_r = sdef.params["R"], sdef.params["r"]
        rho = np.hypot(pts[:, 0], pts[:, 1])
        theta = np.arctan2(pts[:, 2] / small_r, (rho - big_r) / small_r)

        def kmean(t):
            return np.abs(big_r + 2.0 * small_r * np.cos(t)) / (
                2.0 * small_r * (big_r + small_r * np.cos(t))
            )

        d1, d2 = _fd_second(kmean, theta, h)
        ring = big_r + small_r * np.cos(theta)
        out = (d2 + (-small_r * np.sin(theta)) / ring * d1) / small_r**2
    elif sdef.name == "ellipsoid" and sdef.axis_symmetric:
        a, c = sdef.params["a"], sdef.params["c"]
        rho = np.hypot(pts[:, 0], pts[:, 1])
        # profile (rho, z) = (a sin u, c cos u)
        u = np.arctan2(rho / a, pts[:, 2] / c)

        def kmean(t):
            xs, zs = a * np.sin(t), c * np.cos(t)
            w = xs**2 / a**4 + zs**2 / c**4
            return np.abs(xs**2 + zs**2 - 2 * a**2 - c**2) / (2.0 * (a * a * c) ** 2 * w**1.5)

        d1, d2 = _fd_second(kmean, u, h)
        gp = np.sqrt(a**2 * np.cos(u) ** 2 + c**2 * np.sin(u) ** 2)
        rho_u = a * np.cos(u)
        # d/du of rho/|gamma'| over (rho/|gamma'|), via product/chain rule
        gp_u = (c**2 - a**2) * np.sin(u) * np.cos(u) / gp
        out = (d2 + (rho_u / (a * np.sin(u)) - gp_u / gp) * d1) / gp**2
    else:
        raise UnsupportedOracleError(
            "finite-difference Laplacian oracle requires a torus or an a == b ellipsoid"
        )
    out = np.abs(out)
    return float(out[0]) if single else out


# -- synthetic non-algebraic surface ----------------------------------------------


def synthetic_point(theta, phi, base: float = 0.7, amplitude: float = 0.1):
    """Point and exact outward unit normal of the star surface
    r(theta, phi) = base + amplitude sin(3 theta) sin(2 phi)."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    r = base + amplitude * np.sin(3 * theta) * np.sin(2 * phi)
    r_t = 3 * amplitude * np.cos(3 * theta) * np.sin(2 * phi)
    r_p = 2 * amplitude * np.sin(3 * theta) * np.cos(2 * phi)
    u = np.stack([st * cp, st * sp, ct], axis=-1)
    u_t = np.stack([ct * cp, ct * sp, -st], axis=-1)
    u_p = np.stack([-st * sp, st * cp, np.zeros_like(st)], axis=-1)
    pts = r[..., None] * u
    tang_t = r_t[..., None] * u + r[..., None] * u_t
    tang_p = r_p[..., None] * u + r[..., None] * u_p
    normal = np.cross(tang_t, tang_p)
    norms = np.linalg.norm(normal, axis=-1, keepdims=True)
    normal = normal / norms
    flip = np.einsum("...i,...i->...", normal, u) < 0
    normal[flip] *= -1.0
    return pts, normal


def sample_synthetic(
    count: int, seed: int = 0, base: float = 0.7, amplitude: float = 0.1
) -> SurfaceSample:
    """Seeded samples of the star surface with exact parametric normals.

    Radii stay within [base - amplitude, base + amplitude], so the surface
    (and its usual offset bands) sits well inside the unit cube. The surface
    has a trigonometric radial profile and is not a polynomial level set of
    any finite degree, which makes it the stand-in for scanned data.
    """
    if count < 1:
        raise DomainError("sample count must be at least 1")
    rng = np.random.default_rng(seed)
    cos_t = rng.uniform(-1.0, 1.0, count)
    theta = np.arccos(cos_t)
    phi = rng.uniform(0.0, 2.0 * math.pi, count)
    pts, normals = synthetic_point(theta, phi, base=base, amplitude=amplitude)
    return SurfaceSample(points=pts, normals=normals, flagged=np.array([], dtype=int))
