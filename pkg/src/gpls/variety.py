"""Fitting algebraic varieties through point clouds.

The pipeline: evaluate the grid's Lagrange basis at the cloud (a collocation
"Vandermonde" matrix), run Gaussian elimination with full pivoting to split
the polynomial space into a part that restricts to a basis on the cloud and
a part that vanishes identically on it, and read the level-set polynomial
off the vanishing part (corank-1 case) or off the on-variety Lagrange
polynomials (general case).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lstsq, solve_triangular

from .errors import CorankError, DomainError, NoVarietyError, NumericalError
from .mindex import MultiIndexSet
from .nodes import UnisolventGrid, build_grid, lebesgue_estimate
from .poly import (
    Polynomial,
    differentiate,
    evaluate,
    lagrange_basis_matrix,
    to_canonical,
)

__all__ = [
    "DomainTransform",
    "Vandermonde",
    "GefpFactorization",
    "GplsSurface",
    "assemble_vandermonde",
    "gefp",
    "kernel_basis",
    "kernel_coefficient_vectors",
    "on_variety_lagrange",
    "build_gpls",
    "error_bound_report",
]

#: default relative pivot threshold separating kernel from co-kernel; on
#: exact algebraic samples genuine pivots stay above ~5e-9 of the first one
#: while kernel pivots sit near 1e-15, so the threshold splits the gap with
#: about three orders of margin on either side
DEFAULT_RANK_TOL = 1e-11

#: bound slack when checking that points lie in the unit cube
CUBE_SLACK = 1e-9


@dataclass(frozen=True)
class DomainTransform:
    """Isotropic affine map between user coordinates and the fit cube.

    domain = (user - translation) / scale. A single scale keeps curvature
    corrections exact: mean curvature transforms by 1/scale, Gauss curvature
    by 1/scale^2, and the surface Laplacian of mean curvature by 1/scale^3.
    """

    scale: float
    translation: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.translation, dtype=float).copy()
        t.setflags(write=False)
        object.__setattr__(self, "translation", t)
        if not self.scale > 0:
            raise DomainError("transform scale must be positive")

    def to_domain(self, x):
        return (np.asarray(x, dtype=float) - self.translation) / self.scale

    def to_user(self, y):
        return self.translation + self.scale * np.asarray(y, dtype=float)

    @property
    def is_identity(self) -> bool:
        return self.scale == 1.0 and not np.any(self.translation)

    @classmethod
    def identity(cls, m: int = 3) -> "DomainTransform":
        return cls(1.0, np.zeros(m))

    @classmethod
    def fit(cls, points, margin: float = 0.95) -> "DomainTransform":
        """Map the cloud's bounding box into [-margin, margin]^m."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        center = 0.5 * (lo + hi)
        half = float(np.max(hi - lo)) / 2.0
        scale = half / margin if half > 0 else 1.0
        return cls(scale, center)

    @classmethod
    def auto(cls, points, margin: float = 0.95) -> "DomainTransform":
        """Identity when the cloud already lies in the unit cube (so fitted
        coefficients stay in user units), otherwise a bounding-box fit."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if np.all(np.abs(pts) <= 1.0 + CUBE_SLACK):
            return cls.identity(pts.shape[1])
        return cls.fit(pts, margin=margin)


@dataclass(frozen=True)
class Vandermonde:
    """Lagrange-basis values at a point cloud: entries[i, a] = L_a(p_i)."""

    index_set: MultiIndexSet
    grid: UnisolventGrid
    points: np.ndarray
    entries: np.ndarray


def assemble_vandermonde(grid: UnisolventGrid, points) -> Vandermonde:
    """Collocation matrix of the grid's Lagrange basis at the given points.

    Points must lie in the unit cube up to a small slack; rows at grid nodes
    come out as unit vectors by the L_a(p_b) = delta property.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] < 1:
        raise DomainError("at least one point is required")
    if pts.shape[1] != grid.index_set.m:
        raise DomainError(
            f"points have {pts.shape[1]} coordinates, grid expects {grid.index_set.m}"
        )
    outside = np.nonzero(np.any(np.abs(pts) > 1.0 + CUBE_SLACK, axis=1))[0]
    if outside.size:
        i = int(outside[0])
        raise DomainError(
            f"point {i} = {pts[i].tolist()} lies outside the unit cube "
            f"(and {outside.size - 1} more); rescale with a DomainTransform first"
        )
    entries = lagrange_basis_matrix(grid, pts)
    pts = pts.copy()
    pts.setflags(write=False)
    entries.setflags(write=False)
    return Vandermonde(grid.index_set, grid, pts, entries)


@dataclass
class GefpFactorization:
    """Rank-revealing LU split W1 R W2 = L U from full pivoting.

    ``lower`` is unit lower trapezoidal (#rows x rank), ``upper`` is the
    rank-profile factor (rank x #cols) whose leading rank x rank block U1 is
    upper triangular with nonvanishing diagonal; the trailing block U2 feeds
    kernel extraction. ``row_perm``/``col_perm`` map permuted positions to
    original ones. ``stopped_pivot`` records the first below-threshold pivot
    magnitude (None when the matrix was eliminated to the end).
    """

    row_perm: np.ndarray
    col_perm: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    rank: int
    pivot_magnitudes: np.ndarray
    stopped_pivot: float | None = None
    vandermonde: Vandermonde | None = field(default=None, repr=False)

    @property
    def u1(self) -> np.ndarray:
        return self.upper[:, : self.rank]

    @property
    def u2(self) -> np.ndarray:
        return self.upper[:, self.rank :]

    @property
    def corank(self) -> int:
        return self.col_perm.size - self.rank


def gefp(source, rank_tol: float = DEFAULT_RANK_TOL) -> GefpFactorization:
    """Gaussian elimination with full pivoting and rank detection.

    Accepts a Vandermonde or a plain matrix. Pivots are chosen as the
    largest magnitude in the remaining submatrix (ties: smallest row, then
    column, in the current ordering); elimination stops once the best
    available pivot falls to ``rank_tol`` times the first pivot, and the
    count of accepted pivots is the detected rank. An all-zero matrix yields
    rank 0 with empty factors.
    """
    if isinstance(source, Vandermonde):
        work = np.array(source.entries, dtype=float)
        origin = source
    else:
        work = np.array(source, dtype=float, copy=True)
        work = np.atleast_2d(work)
        origin = None
    n_rows, n_cols = work.shape
    row_perm = np.arange(n_rows)
    col_perm = np.arange(n_cols)
    pivots: list[float] = []
    stopped = None
    first_pivot = None
    for k in range(min(n_rows, n_cols)):
        sub = np.abs(work[k:, k:])
        flat = int(sub.argmax())
        mx = float(sub.flat[flat])
        if first_pivot is None:
            first_pivot = mx
        if mx == 0.0 or mx <= rank_tol * first_pivot:
            stopped = mx
            break
        ri, ci = divmod(flat, n_cols - k)
        ri += k
        ci += k
        if ri != k:
            work[[k, ri]] = work[[ri, k]]
            row_perm[[k, ri]] = row_perm[[ri, k]]
        if ci != k:
            work[:, [k, ci]] = work[:, [ci, k]]
            col_perm[[k, ci]] = col_perm[[ci, k]]
        pivots.append(abs(work[k, k]))
        if k + 1 < n_rows:
            work[k + 1 :, k] /= work[k, k]
            work[k + 1 :, k + 1 :] -= np.outer(work[k + 1 :, k], work[k, k + 1 :])
    rank = len(pivots)
    lower = np.tril(work[:, :rank], -1)
    lower[np.arange(rank), np.arange(rank)] = 1.0
    upper = np.triu(work[:rank, :])
    return GefpFactorization(
        row_perm, col_perm, lower, upper, rank, np.array(pivots), stopped, origin
    )


def kernel_coefficient_vectors(fact: GefpFactorization) -> np.ndarray:
    """Null-space coefficient vectors, one column per kernel direction.

    Column j solves U1 d = -U2 e_j by back substitution and carries +1 on
    the (rank+j)-th permuted coordinate, so U [d; e_j] = 0 exactly; rows are
    returned in the original (unpermuted) column order.
    """
    n_cols = fact.col_perm.size
    corank = fact.corank
    if corank == 0:
        return np.zeros((n_cols, 0))
    if fact.rank:
        head = solve_triangular(fact.u1, -fact.u2, lower=False)
    else:
        head = np.zeros((0, corank))
    permuted = np.vstack([head, np.eye(corank)])
    out = np.zeros((n_cols, corank))
    out[fact.col_perm] = permuted
    return out


def kernel_basis(fact: GefpFactorization) -> list[Polynomial]:
    """Basis of the vanishing ideal within the space: polynomials zero on
    every input point, in the grid's Lagrange basis."""
    if fact.vandermonde is None:
        raise DomainError("factorization carries no grid context; factor a Vandermonde")
    vecs = kernel_coefficient_vectors(fact)
    grid = fact.vandermonde.grid
    return [
        Polynomial(fact.vandermonde.index_set, "lagrange", vecs[:, j], grid=grid)
        for j in range(vecs.shape[1])
    ]


def on_variety_lagrange(fact: GefpFactorization) -> list[Polynomial]:
    """Lagrange polynomials of the anchor subset: the i-th one is 1 at the
    i-th anchor point and 0 at the others (minimum-norm representatives)."""
    if fact.rank < 1:
        raise DomainError("rank is zero; there are no anchor points")
    if fact.vandermonde is None:
        raise DomainError("factorization carries no grid context; factor a Vandermonde")
    anchor_rows = fact.vandermonde.entries[fact.row_perm[: fact.rank]]
    coeffs, *_ = lstsq(anchor_rows, np.eye(fact.rank))
    grid = fact.vandermonde.grid
    return [
        Polynomial(fact.vandermonde.index_set, "lagrange", coeffs[:, i], grid=grid)
        for i in range(fact.rank)
    ]


# -- the fitted surface --------------------------------------------------------


class GplsSurface:
    """A fitted level-set surface.

    ``q`` is the canonical level-set polynomial over domain (cube)
    coordinates; its zero set approximates the sampled surface. The
    vanishing-ideal basis the fit produced, the detected rank, the anchor
    subset (indices into the input cloud), and the user/domain transform are
    kept alongside. Immutable after construction.
    """

    def __init__(
        self,
        q: Polynomial,
        kernel_basis: list | None = None,
        rank: int = 0,
        anchor_indices=None,
        transform: DomainTransform | None = None,
        fit_report: dict | None = None,
        grid: UnisolventGrid | None = None,
        factorization: GefpFactorization | None = None,
    ):
        self.q = q
        self.kernel_basis = list(kernel_basis or [])
        self.rank = int(rank)
        self.anchor_indices = np.asarray(
            anchor_indices if anchor_indices is not None else [], dtype=int
        )
        self.transform = transform or DomainTransform.identity(q.m)
        self.fit_report = dict(fit_report or {})
        self.grid = grid
        self.factorization = factorization
        self._jet = None  # geometry cache, filled lazily

    @property
    def corank(self) -> int:
        return int(self.fit_report.get("corank", len(self.kernel_basis)))

    def __call__(self, x):
        """Level-set value at user coordinates."""
        return evaluate(self.q, self.transform.to_domain(x))

    def __repr__(self) -> str:
        return (
            f"GplsSurface(rank={self.rank}, corank={self.corank}, "
            f"mode={self.fit_report.get('mode')!r})"
        )

    @classmethod
    def from_polynomial(cls, poly: Polynomial, transform: DomainTransform | None = None):
        """Wrap a known implicit polynomial (e.g. an exact catalog surface)."""
        canon = to_canonical(poly)
        return cls(
            canon,
            kernel_basis=[],
            rank=0,
            anchor_indices=[],
            transform=transform or DomainTransform.identity(poly.m),
            fit_report={"mode": "exact", "corank": 0, "max_residual": 0.0, "rank_tol": None},
        )


def _leading_position(coeffs: np.ndarray, tol_scale: float = 1e-8) -> int:
    """Position of the lex-largest coefficient that is genuinely nonzero."""
    biggest = np.abs(coeffs).max()
    if biggest == 0.0:
        raise NumericalError("polynomial is identically zero")
    nz = np.nonzero(np.abs(coeffs) > tol_scale * biggest)[0]
    return int(nz[-1])


def _normalize_level_set(poly: Polynomial) -> Polynomial:
    """Scale to unit max canonical coefficient with a positive leading one."""
    coeffs = poly.coefficients
    scale = np.abs(coeffs).max()
    if scale == 0.0:
        raise NumericalError("kernel polynomial is identically zero")
    lead = _leading_position(coeffs)
    sign = 1.0 if coeffs[lead] > 0 else -1.0
    return Polynomial(poly.index_set, "canonical", coeffs * (sign / scale))


def build_gpls(
    points,
    index_set: MultiIndexSet,
    mode: str = "kernel-corank1",
    rank_tol: float = DEFAULT_RANK_TOL,
    transform: DomainTransform | None = None,
    grid: UnisolventGrid | None = None,
) -> GplsSurface:
    """Fit a level-set polynomial whose zero set passes through the cloud.

    ``kernel-corank1`` (default) requires exactly one polynomial direction
    vanishing on the cloud and returns it, rescaled to unit max coefficient
    with a positive leading term. ``lagrange-sum`` assembles the sum of the
    anchor Lagrange polynomials minus one, which vanishes on the cloud in
    general position. Raises NoVarietyError when the cloud is unisolvent
    (corank 0) and CorankError when corank exceeds 1 in kernel mode.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if mode not in ("kernel-corank1", "lagrange-sum"):
        raise DomainError(f"unknown mode {mode!r}")
    tr = transform or DomainTransform.auto(pts)
    domain_pts = tr.to_domain(pts)
    grid = grid or build_grid(index_set)
    vand = assemble_vandermonde(grid, domain_pts)
    fact = gefp(vand, rank_tol=rank_tol)
    corank = fact.corank
    if corank == 0:
        raise NoVarietyError(
            "the point cloud is unisolvent for this space: no nonzero polynomial "
            "vanishes on it; raise the degree or supply more constrained points"
        )
    kernels = [to_canonical(k) for k in kernel_basis(fact)]
    if mode == "kernel-corank1":
        if corank != 1:
            raise CorankError(
                corank,
                f"kernel is {corank}-dimensional; lower the degree or use mode='lagrange-sum'",
            )
        q = _normalize_level_set(kernels[0])
    else:
        anchors = on_variety_lagrange(fact)
        summed = np.sum([a.coefficients for a in anchors], axis=0) - 1.0
        q = to_canonical(Polynomial(index_set, "lagrange", summed, grid=grid))

    residuals = np.abs(evaluate(q, domain_pts))
    grad_norms = _gradient_norms(q, domain_pts)
    degen_tol = 1e-10 * max(1.0, float(np.abs(q.coefficients).max()))
    degenerate = np.nonzero(grad_norms < degen_tol)[0]
    report = {
        "mode": mode,
        "rank_tol": rank_tol,
        "max_residual": float(residuals.max()),
        "corank": corank,
        "degenerate_points": degenerate.tolist(),
    }
    gap = fact.stopped_pivot
    if gap is not None and fact.pivot_magnitudes.size and gap > 1e-3 * fact.pivot_magnitudes[-1]:
        report["conditioning_warning"] = (
            "kernel/co-kernel pivot separation is weak; the rank split may be unreliable"
        )
        warnings.warn(report["conditioning_warning"], stacklevel=2)
    if degenerate.size:
        warnings.warn(
            f"level-set gradient vanishes at {degenerate.size} input point(s); "
            "curvature is undefined there",
            stacklevel=2,
        )
    return GplsSurface(
        q,
        kernel_basis=kernels,
        rank=fact.rank,
        anchor_indices=fact.row_perm[: fact.rank].copy(),
        transform=tr,
        fit_report=report,
        grid=grid,
        factorization=fact,
    )


def _gradient_norms(q: Polynomial, pts: np.ndarray) -> np.ndarray:
    grads = np.stack([evaluate(differentiate(q, i), pts) for i in range(q.m)], axis=1)
    return np.linalg.norm(grads, axis=1)


def error_bound_report(
    grid: UnisolventGrid,
    fact: GefpFactorization,
    lebesgue_budget: int = 1024,
    seed: int = 0,
) -> dict:
    """Diagnostic error-amplification factors for a fit.

    Reports the sampled Lebesgue constant of the grid, the infinity norm of
    the pseudo-inverse of the anchor-row block, and the composite factor
    (1 + Lambda * |S|_inf) that scales interpolation error estimates. Purely
    informational; carries no pass/fail semantics.
    """
    if fact.rank < 1:
        raise DomainError("rank is zero; no anchor rows to analyze")
    if fact.vandermonde is None:
        raise DomainError("factorization carries no grid context")
    anchor_rows = fact.vandermonde.entries[fact.row_perm[: fact.rank]]
    pinv = np.linalg.pinv(anchor_rows)
    s_norm = float(np.abs(pinv).sum(axis=1).max())
    lam = lebesgue_estimate(grid, lebesgue_budget, seed)
    return {
        "lebesgue_lower_bound": lam,
        "pseudoinverse_inf_norm": s_norm,
        "amplification_factor": 1.0 + lam * s_norm,
    }
