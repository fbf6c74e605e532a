"""Differential geometry on polynomial level sets.

Everything here is assembled from exact formal derivatives of the fitted
polynomial: closest-point projection follows the gradient flow, mean and
Gauss curvature come from the gradient and Hessian, and the surface
Laplacian of mean curvature splits K = u*v into a polynomial part
u = (grad q . H . grad q - |grad q|^2 tr H)/2 and the gradient-norm power
v = |grad q|^-3, whose first and second derivative tensors are evaluated
from cached polynomial partials. No nested numerical differentiation
anywhere; the only iteration is the projection's Newton loop.

All geometric quantities are computed in domain (cube) coordinates and the
three curvature outputs are corrected back to user units through the
surface's isotropic transform (1/s, 1/s^2, 1/s^3). Scalar fields passed to
``surface_gradient`` and ``laplace_beltrami`` are understood as polynomials
over domain coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DegenerateGradientError, DomainError
from .poly import Polynomial, differentiate, evaluate, partial_derivative, poly_sum, to_canonical
from .variety import GplsSurface

__all__ = [
    "SurfaceJet",
    "CurvatureReport",
    "jet_of",
    "project_to_surface",
    "project_points",
    "mean_curvature",
    "gauss_curvature",
    "surface_gradient",
    "laplace_beltrami",
    "laplacian_mean_curvature",
    "curvature_report",
]

#: projection and degeneracy defaults
MAX_PROJECTION_ITER = 50


def _unit(i: int, m: int) -> tuple:
    e = [0] * m
    e[i] = 1
    return tuple(e)


class SurfaceJet:
    """Cached partial derivatives of a surface's level-set polynomial.

    Partials are requested by multi-order, computed in a fixed axis order
    (so mixed partials are symmetric by construction), and cached; orders up
    to four are what the Laplacian of mean curvature consumes. The heavier
    machinery for that operator (the polynomial u, the squared gradient
    norm g, and their first/second derivative polynomials) is built once on
    first use.
    """

    def __init__(self, surface: GplsSurface):
        q = to_canonical(surface.q)
        if q.m != 3:
            raise DomainError("surface geometry is specialized to 3 dimensions")
        self.surface = surface
        self.q = q
        self._partials = {(0, 0, 0): q}
        self._lap = None
        self.degeneracy_threshold = 1e-10 * max(1.0, float(np.abs(q.coefficients).max()))

    def partial(self, orders) -> Polynomial:
        """Partial-derivative polynomial for a multi-order like (1, 0, 2)."""
        key = tuple(int(v) for v in orders)
        if len(key) != 3 or any(v < 0 for v in key):
            raise DomainError(f"bad derivative order {orders!r}")
        if key not in self._partials:
            self._partials[key] = partial_derivative(self.q, key)
        return self._partials[key]

    def gradient_polys(self) -> list:
        return [self.partial(_unit(i, 3)) for i in range(3)]

    def values(self, pts: np.ndarray):
        """q, gradient rows, and Hessian stack at a batch of domain points."""
        qv = evaluate(self.q, pts)
        grad = np.stack([evaluate(g, pts) for g in self.gradient_polys()], axis=-1)
        hess = np.empty(pts.shape[:-1] + (3, 3))
        for i in range(3):
            for j in range(i, 3):
                order = [0, 0, 0]
                order[i] += 1
                order[j] += 1
                val = evaluate(self.partial(tuple(order)), pts)
                hess[..., i, j] = val
                hess[..., j, i] = val
        return qv, grad, hess

    def _second_partials(self, poly: Polynomial):
        grads = [differentiate(poly, i) for i in range(3)]
        hess = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(i, 3):
                hess[i][j] = hess[j][i] = differentiate(grads[i], j)
        return grads, hess

    def _lap_machinery(self):
        if self._lap is None:
            grads = self.gradient_polys()
            hess_polys = [[self.partial(tuple(np.add(_unit(i, 3), _unit(j, 3)))) for j in range(3)] for i in range(3)]
            g = poly_sum(*[grads[i] * grads[i] for i in range(3)])
            quad = poly_sum(*[grads[i] * hess_polys[i][j] * grads[j] for i in range(3) for j in range(3)])
            trace = poly_sum(*[hess_polys[i][i] for i in range(3)])
            u = (quad - g * trace) * 0.5
            g_grads, g_hess = self._second_partials(g)
            u_grads, u_hess = self._second_partials(u)
            self._lap = {
                "g": g,
                "g_grads": g_grads,
                "g_hess": g_hess,
                "u": u,
                "u_grads": u_grads,
                "u_hess": u_hess,
            }
        return self._lap


def jet_of(surface: GplsSurface) -> SurfaceJet:
    """The surface's cached derivative bundle (built on first request)."""
    if surface._jet is None:
        surface._jet = SurfaceJet(surface)
    return surface._jet


# -- closest-point projection --------------------------------------------------


def _default_tol(q: Polynomial) -> float:
    return 1e-14 * (1.0 + float(np.abs(q.coefficients).max()))


def project_points(surface: GplsSurface, points, max_iter: int = MAX_PROJECTION_ITER, tol=None):
    """Project a batch of user-space points onto the zero level set.

    Newton steps x -> x - q(x) grad q(x)/|grad q(x)|^2 along the gradient
    flow, with one half-step fallback per iteration when a full step grows
    |q|. Returns (projected points, distances, converged mask) in user
    units; rows whose gradient collapsed are left unconverged.
    """
    jet = jet_of(surface)
    tr = surface.transform
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    y = tr.to_domain(pts).copy()
    tol = _default_tol(jet.q) if tol is None else float(tol)
    gtol2 = jet.degeneracy_threshold**2

    qv = evaluate(jet.q, y)
    done = np.abs(qv) <= tol
    failed = np.zeros(len(y), dtype=bool)
    grad_polys = jet.gradient_polys()
    for _ in range(max_iter):
        active = ~done & ~failed
        if not active.any():
            break
        ya = y[active]
        grad = np.stack([evaluate(g, ya) for g in grad_polys], axis=-1)
        gn2 = np.einsum("ni,ni->n", grad, grad)
        collapse = gn2 < gtol2
        if collapse.any():
            idx = np.nonzero(active)[0][collapse]
            failed[idx] = True
            active[idx] = False
            keep = ~collapse
            ya, grad, gn2 = ya[keep], grad[keep], gn2[keep]
            if ya.shape[0] == 0:
                continue
        qa = qv[active]
        step = (qa / gn2)[:, None] * grad
        cand = ya - step
        qc = evaluate(jet.q, cand)
        overshoot = np.abs(qc) > np.abs(qa)
        if overshoot.any():
            cand[overshoot] = ya[overshoot] - 0.5 * step[overshoot]
            qc[overshoot] = evaluate(jet.q, cand[overshoot])
        y[active] = cand
        qv[active] = qc
        done[active] = np.abs(qc) <= tol
    projected = tr.to_user(y)
    distances = np.linalg.norm(projected - pts, axis=1)
    # first-order remainder |q|/|grad q| so a point already inside the
    # tolerance band reports its residual distance instead of exactly zero
    converged = done & ~failed
    if converged.any():
        grad = np.stack([evaluate(g, y[converged]) for g in grad_polys], axis=-1)
        gn = np.linalg.norm(grad, axis=1)
        ok = gn > jet.degeneracy_threshold
        rem = np.zeros(gn.shape)
        rem[ok] = np.abs(qv[converged][ok]) / gn[ok] * tr.scale
        distances[converged] += rem
    return projected, distances, converged


def project_to_surface(surface: GplsSurface, x, max_iter: int = MAX_PROJECTION_ITER, tol=None):
    """Project one point onto the zero set; returns (point, distance).

    Raises DegenerateGradientError when the gradient collapses along the
    path and ConvergenceError (carrying the last iterate and residual) when
    the step budget runs out.
    """
    arr = np.asarray(x, dtype=float)
    projected, distances, converged = project_points(surface, arr, max_iter=max_iter, tol=tol)
    if not converged[0]:
        resid = float(abs(surface(projected[0])))
        jet = jet_of(surface)
        grad = np.array([evaluate(g, surface.transform.to_domain(projected[0]))
                         for g in jet.gradient_polys()])
        if np.linalg.norm(grad) < jet.degeneracy_threshold:
            raise DegenerateGradientError(
                f"gradient collapsed near {projected[0].tolist()} during projection"
            )
        raise ConvergenceError(
            f"projection did not reach tolerance in {max_iter} iterations",
            last_point=projected[0],
            residual=resid,
        )
    return projected[0], float(distances[0])


# -- curvature ------------------------------------------------------------------


def _grad_hess_checked(jet: SurfaceJet, x):
    pts = np.atleast_2d(jet.surface.transform.to_domain(np.asarray(x, dtype=float)))
    _, grad, hess = jet.values(pts)
    norms = np.linalg.norm(grad, axis=-1)
    bad = np.nonzero(norms < jet.degeneracy_threshold)[0]
    if bad.size:
        raise DegenerateGradientError(
            f"level-set gradient vanishes at point(s) {bad.tolist()}; "
            "curvature is undefined there"
        )
    return pts, grad, hess, norms


def mean_curvature(jet: SurfaceJet, x):
    """Signed mean curvature, oriented by the level-set gradient.

    (grad q . H . grad q - |grad q|^2 tr H) / (2 |grad q|^3), corrected to
    user units by 1/scale. The unit sphere with outward gradient gives -1.
    Accepts one point or a batch.
    """
    single = np.asarray(x).ndim == 1
    _, grad, hess, norms = _grad_hess_checked(jet, x)
    quad = np.einsum("ni,nij,nj->n", grad, hess, grad)
    trace = np.trace(hess, axis1=-2, axis2=-1)
    k = (quad - norms**2 * trace) / (2.0 * norms**3)
    k = k / jet.surface.transform.scale
    return float(k[0]) if single else k


def _adjugate3(hess: np.ndarray) -> np.ndarray:
    # adjugate of a stack of symmetric 3x3 matrices, written out cofactor by
    # cofactor to stay exact for rank-deficient input
    a = hess[..., 0, 0]
    b = hess[..., 0, 1]
    c = hess[..., 0, 2]
    d = hess[..., 1, 1]
    e = hess[..., 1, 2]
    f = hess[..., 2, 2]
    adj = np.empty_like(hess)
    adj[..., 0, 0] = d * f - e * e
    adj[..., 1, 1] = a * f - c * c
    adj[..., 2, 2] = a * d - b * b
    adj[..., 0, 1] = adj[..., 1, 0] = c * e - b * f
    adj[..., 0, 2] = adj[..., 2, 0] = b * e - c * d
    adj[..., 1, 2] = adj[..., 2, 1] = b * c - a * e
    return adj


def gauss_curvature(jet: SurfaceJet, x):
    """Gauss curvature grad q . adj(H) . grad q / |grad q|^4.

    The adjugate form fixes the sign so the unit sphere yields +1 (the
    equivalent bordered-determinant expression is its negative) and is
    independent of the level-set polynomial's orientation. Corrected to
    user units by 1/scale^2.
    """
    single = np.asarray(x).ndim == 1
    _, grad, hess, norms = _grad_hess_checked(jet, x)
    k = np.einsum("ni,nij,nj->n", grad, _adjugate3(hess), grad) / norms**4
    k = k / jet.surface.transform.scale**2
    return float(k[0]) if single else k


def _field_derivatives(f: Polynomial, pts: np.ndarray):
    canon = to_canonical(f)
    grads = [differentiate(canon, i) for i in range(3)]
    grad = np.stack([evaluate(g, pts) for g in grads], axis=-1)
    hess = np.empty(pts.shape[:-1] + (3, 3))
    for i in range(3):
        for j in range(i, 3):
            val = evaluate(differentiate(grads[i], j), pts)
            hess[..., i, j] = val
            hess[..., j, i] = val
    return evaluate(canon, pts), grad, hess


def surface_gradient(jet: SurfaceJet, f: Polynomial, x):
    """Tangential part of grad f: grad f - <eta, grad f> eta (domain units)."""
    single = np.asarray(x).ndim == 1
    pts, grad_q, _, norms = _grad_hess_checked(jet, x)
    eta = grad_q / norms[:, None]
    _, grad_f, _ = _field_derivatives(f, pts)
    tangential = grad_f - np.einsum("ni,ni->n", eta, grad_f)[:, None] * eta
    return tangential[0] if single else tangential


def laplace_beltrami(jet: SurfaceJet, f: Polynomial, x):
    """Surface-intrinsic Laplacian of a polynomial field on the level set.

    lap f + 2 K_mean <eta, grad f> - <eta, hess f . eta>, with all
    derivatives exact and K_mean in matching (domain) units.
    """
    single = np.asarray(x).ndim == 1
    pts, grad_q, hess_q, norms = _grad_hess_checked(jet, x)
    eta = grad_q / norms[:, None]
    quad = np.einsum("ni,nij,nj->n", grad_q, hess_q, grad_q)
    k_domain = (quad - norms**2 * np.trace(hess_q, axis1=-2, axis2=-1)) / (2.0 * norms**3)
    _, grad_f, hess_f = _field_derivatives(f, pts)
    lap_f = np.trace(hess_f, axis1=-2, axis2=-1)
    normal_grad = np.einsum("ni,ni->n", eta, grad_f)
    normal_hess = np.einsum("ni,nij,nj->n", eta, hess_f, eta)
    out = lap_f + 2.0 * k_domain * normal_grad - normal_hess
    return float(out[0]) if single else out


def laplacian_mean_curvature(jet: SurfaceJet, x):
    """Surface Laplacian of mean curvature via the product split K = u*v.

    u and its derivative tensors are exact polynomial evaluations; v =
    g^(-3/2) with g = |grad q|^2 differentiates through the chain rule on
    the polynomial g. Corrected to user units by 1/scale^3.
    """
    single = np.asarray(x).ndim == 1
    pts, grad_q, _, norms = _grad_hess_checked(jet, x)
    eta = grad_q / norms[:, None]
    mach = jet._lap_machinery()

    g = evaluate(mach["g"], pts)
    g_grad = np.stack([evaluate(p, pts) for p in mach["g_grads"]], axis=-1)
    g_hess = np.stack(
        [np.stack([evaluate(mach["g_hess"][i][j], pts) for j in range(3)], axis=-1) for i in range(3)],
        axis=-2,
    )
    u = evaluate(mach["u"], pts)
    u_grad = np.stack([evaluate(p, pts) for p in mach["u_grads"]], axis=-1)
    u_hess = np.stack(
        [np.stack([evaluate(mach["u_hess"][i][j], pts) for j in range(3)], axis=-1) for i in range(3)],
        axis=-2,
    )

    v = g ** (-1.5)
    v_grad = -1.5 * (g ** (-2.5))[:, None] * g_grad
    v_hess = (
        3.75 * (g ** (-3.5))[:, None, None] * np.einsum("ni,nj->nij", g_grad, g_grad)
        - 1.5 * (g ** (-2.5))[:, None, None] * g_hess
    )

    k_domain = u * v
    lap_u = np.trace(u_hess, axis1=-2, axis2=-1)
    lap_v = np.trace(v_hess, axis1=-2, axis2=-1)
    lap_uv = u * lap_v + 2.0 * np.einsum("ni,ni->n", u_grad, v_grad) + v * lap_u
    grad_uv = u[:, None] * v_grad + v[:, None] * u_grad
    hess_uv = (
        u[:, None, None] * v_hess
        + np.einsum("ni,nj->nij", u_grad, v_grad)
        + np.einsum("ni,nj->nij", v_grad, u_grad)
        + v[:, None, None] * u_hess
    )
    out = (
        lap_uv
        + 2.0 * k_domain * np.einsum("ni,ni->n", eta, grad_uv)
        - np.einsum("ni,nij,nj->n", eta, hess_uv, eta)
    )
    out = out / jet.surface.transform.scale**3
    return float(out[0]) if single else out


# -- reporting ------------------------------------------------------------------


@dataclass
class CurvatureReport:
    """Per-point curvature records plus summary error statistics.

    Points whose gradient norm fell below the degeneracy threshold carry no
    record; their indices (into the input batch) are listed separately.
    """

    points: np.ndarray
    grad_norms: np.ndarray
    k_mean: np.ndarray
    k_gauss: np.ndarray
    lap_k_mean: np.ndarray | None = None
    oracle_k_mean: np.ndarray | None = None
    oracle_k_gauss: np.ndarray | None = None
    oracle_lap_k_mean: np.ndarray | None = None
    degenerate_indices: np.ndarray = field(default_factory=lambda: np.array([], dtype=int))
    compare_absolute_mean: bool = False

    def summary(self) -> dict:
        out = {"n_points": int(len(self.points)), "n_degenerate": int(self.degenerate_indices.size)}
        if self.oracle_k_mean is not None:
            measured = np.abs(self.k_mean) if self.compare_absolute_mean else self.k_mean
            target = np.abs(self.oracle_k_mean) if self.compare_absolute_mean else self.oracle_k_mean
            err = np.abs(measured - target)
            out["k_mean_err_inf"] = float(err.max())
            out["k_mean_err_mean"] = float(err.mean())
        if self.oracle_k_gauss is not None:
            err = np.abs(self.k_gauss - self.oracle_k_gauss)
            out["k_gauss_err_inf"] = float(err.max())
            out["k_gauss_err_mean"] = float(err.mean())
        if self.lap_k_mean is not None and self.oracle_lap_k_mean is not None:
            err = np.abs(self.lap_k_mean - self.oracle_lap_k_mean)
            out["lap_k_mean_err_inf"] = float(err.max())
            out["lap_k_mean_err_mean"] = float(err.mean())
        return out


def curvature_report(
    surface: GplsSurface,
    points,
    oracle=None,
    laplacian: bool = False,
    compare_absolute_mean: bool = True,
) -> CurvatureReport:
    """Curvature of the fitted surface at a batch of (near-)surface points.

    ``oracle``, when given, is a callable points -> (k_mean, k_gauss) or
    points -> (k_mean, k_gauss, lap_k_mean); mean-curvature errors compare
    absolute values by default since the oracle's orientation convention may
    differ from the fit's.
    """
    jet = jet_of(surface)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    domain_pts = surface.transform.to_domain(pts)
    grads = np.stack([evaluate(g, domain_pts) for g in jet.gradient_polys()], axis=-1)
    norms = np.linalg.norm(grads, axis=1)
    good = norms >= jet.degeneracy_threshold
    degenerate = np.nonzero(~good)[0]
    kept = pts[good]
    report = CurvatureReport(
        points=kept,
        grad_norms=norms[good],
        k_mean=mean_curvature(jet, kept),
        k_gauss=gauss_curvature(jet, kept),
        degenerate_indices=degenerate,
        compare_absolute_mean=compare_absolute_mean,
    )
    if laplacian:
        report.lap_k_mean = laplacian_mean_curvature(jet, kept)
    if oracle is not None:
        values = oracle(kept)
        report.oracle_k_mean = np.asarray(values[0], dtype=float)
        report.oracle_k_gauss = np.asarray(values[1], dtype=float)
        if laplacian and len(values) > 2 and values[2] is not None:
            report.oracle_lap_k_mean = np.asarray(values[2], dtype=float)
    return report
