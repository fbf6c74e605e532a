"""Multivariate polynomials over Newton, Lagrange-on-grid, and canonical bases.

The Newton basis attached to a grid is the workhorse: interpolation is a
single forward substitution against the (triangular) Newton-on-grid matrix,
and Lagrange basis values at arbitrary points come from one back
substitution against its transpose. Canonical (monomial) coefficients are
only materialized when formal derivatives or coefficient comparisons are
needed; the transform expands each Newton product via exact convolution of
its 1D factors, which is accurate for the moderate degrees (n <= ~15) this
package targets and degrades with the usual monomial-basis conditioning
beyond that.
"""

from __future__ import annotations

import numbers

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DomainError
from .mindex import MultiIndexSet, build_index_set, covering_degree
from .nodes import UnisolventGrid, build_grid

__all__ = [
    "Polynomial",
    "evaluate",
    "interpolate",
    "to_canonical",
    "to_newton",
    "differentiate",
    "partial_derivative",
    "newton_basis_matrix",
    "newton_on_grid_matrix",
    "lagrange_basis_matrix",
    "canonical_basis_matrix",
    "canonical_polynomial",
    "coefficients_on",
    "multiply",
    "poly_sum",
]

_BASES = ("newton", "lagrange", "canonical")


class Polynomial:
    """Coefficients over a named basis, aligned with an index set's order.

    ``newton`` and ``lagrange`` polynomials carry the grid their basis is
    defined on; ``canonical`` coefficients are plain monomial coefficients.
    Instances are immutable. Canonical polynomials support +, -, * (with
    scalars and with each other) and integer powers, which is how implicit
    surface formulas and derived curvature fields are assembled.
    """

    def __init__(self, index_set: MultiIndexSet, basis: str, coefficients, grid=None):
        if basis not in _BASES:
            raise DomainError(f"unknown basis {basis!r}; expected one of {_BASES}")
        coeffs = np.asarray(coefficients, dtype=float).copy()
        if coeffs.shape != (len(index_set),):
            raise DomainError(
                f"expected {len(index_set)} coefficients, got shape {coeffs.shape}"
            )
        if basis in ("newton", "lagrange"):
            if grid is None:
                raise DomainError(f"{basis} polynomials require the grid they live on")
            if grid.index_set is not index_set and grid.index_set != index_set:
                raise DomainError("grid and coefficient index sets disagree")
        else:
            grid = None
        coeffs.setflags(write=False)
        self.index_set = index_set
        self.basis = basis
        self.coefficients = coeffs
        self.grid = grid

    @property
    def m(self) -> int:
        return self.index_set.m

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self) -> str:
        return f"Polynomial(basis={self.basis!r}, {self.index_set!r})"

    # -- canonical-basis algebra -------------------------------------------

    def _require_canonical(self, op):
        if self.basis != "canonical":
            raise DomainError(f"{op} is defined for canonical polynomials only")

    def __neg__(self):
        self._require_canonical("negation")
        return Polynomial(self.index_set, "canonical", -self.coefficients)

    def __add__(self, other):
        self._require_canonical("addition")
        if isinstance(other, numbers.Real):
            other = canonical_polynomial(self.m, {(0,) * self.m: float(other)}, p=self.index_set.p)
        return poly_sum(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return self.__add__(-other if isinstance(other, Polynomial) else -float(other))

    def __rsub__(self, other):
        return (-self).__add__(float(other))

    def __mul__(self, other):
        self._require_canonical("multiplication")
        if isinstance(other, numbers.Real):
            return Polynomial(self.index_set, "canonical", self.coefficients * float(other))
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k):
        self._require_canonical("powers")
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise DomainError("only non-negative integer powers are supported")
        out = canonical_polynomial(self.m, {(0,) * self.m: 1.0}, p=self.index_set.p)
        for _ in range(int(k)):
            out = multiply(out, self)
        return out


# -- basis value matrices ----------------------------------------------------


def _as_points(points, m: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(points, dtype=float)
    single = arr.ndim == 1
    pts = np.atleast_2d(arr)
    if pts.ndim != 2 or pts.shape[1] != m:
        raise DomainError(f"points must have {m} coordinates, got shape {arr.shape}")
    return pts, single


def newton_basis_matrix(generating_points, index_set: MultiIndexSet, points) -> np.ndarray:
    """Values N_alpha(x) of the Newton basis, one row per point.

    Each N_alpha is the product over dimensions of the first alpha_i linear
    factors (x_i - p_{j,i}); the factors are shared across indices through
    per-dimension prefix-product tables, so a batch of points costs
    O(#points * |A| * m).
    """
    pts, _ = _as_points(points, index_set.m)
    out = np.ones((pts.shape[0], len(index_set)))
    idx = index_set.indices
    for i in range(index_set.m):
        gp = np.asarray(generating_points[i], dtype=float)
        w = np.ones((pts.shape[0], gp.size))
        for d in range(1, gp.size):
            w[:, d] = w[:, d - 1] * (pts[:, i] - gp[d - 1])
        out *= w[:, idx[:, i]]
    return out


def newton_on_grid_matrix(grid: UnisolventGrid) -> np.ndarray:
    """Newton basis evaluated at the grid's own nodes.

    Lower triangular in the shared lex order (N_alpha(p_beta) = 0 unless
    alpha <= beta component-wise) with nonzero diagonal; cached on the grid.
    """
    if grid._newton_matrix is None:
        mat = newton_basis_matrix(grid.generating_points, grid.index_set, grid.nodes)
        mat.setflags(write=False)
        grid._newton_matrix = mat
    return grid._newton_matrix


def lagrange_basis_matrix(grid: UnisolventGrid, points) -> np.ndarray:
    """Values L_alpha(x) of the grid's Lagrange basis, one row per point.

    Computed by evaluating the Newton basis and back-substituting against
    the transposed Newton-on-grid matrix; Lagrange product forms are never
    built explicitly.
    """
    nmat = newton_basis_matrix(grid.generating_points, grid.index_set, points)
    ongrid = newton_on_grid_matrix(grid)
    return solve_triangular(ongrid.T, nmat.T, lower=False).T


def canonical_basis_matrix(index_set: MultiIndexSet, points) -> np.ndarray:
    """Monomial values x^alpha, one row per point."""
    pts, _ = _as_points(points, index_set.m)
    out = np.ones((pts.shape[0], len(index_set)))
    idx = index_set.indices
    maxdeg = index_set.max_degrees
    for i in range(index_set.m):
        powers = np.ones((pts.shape[0], int(maxdeg[i]) + 1))
        for d in range(1, int(maxdeg[i]) + 1):
            powers[:, d] = powers[:, d - 1] * pts[:, i]
        out *= powers[:, idx[:, i]]
    return out


# -- evaluation / interpolation ----------------------------------------------


def evaluate(poly: Polynomial, x):
    """Value of the polynomial at one point (1D input) or a batch (2D)."""
    pts, single = _as_points(x, poly.m)
    if poly.basis == "canonical":
        vals = canonical_basis_matrix(poly.index_set, pts) @ poly.coefficients
    elif poly.basis == "newton":
        vals = (
            newton_basis_matrix(poly.grid.generating_points, poly.index_set, pts)
            @ poly.coefficients
        )
    else:
        vals = lagrange_basis_matrix(poly.grid, pts) @ poly.coefficients
    return float(vals[0]) if single else vals


def interpolate(grid: UnisolventGrid, values) -> Polynomial:
    """Newton-form interpolant through the given node values.

    One forward substitution against the triangular Newton-on-grid matrix;
    the result reproduces ``values`` at the nodes up to rounding.
    """
    vals = np.asarray(values, dtype=float)
    if vals.shape != (len(grid),):
        raise DomainError(f"expected {len(grid)} node values, got shape {vals.shape}")
    coeffs = solve_triangular(newton_on_grid_matrix(grid), vals, lower=True)
    return Polynomial(grid.index_set, "newton", coeffs, grid=grid)


# -- basis transforms ---------------------------------------------------------


def _newton1d_factor_table(gp: np.ndarray) -> np.ndarray:
    # Row d holds the monomial coefficients (ascending powers, zero padded)
    # of the 1D factor prod_{j<d} (t - gp[j]).
    nmax = gp.size - 1
    table = np.zeros((nmax + 1, nmax + 1))
    table[0, 0] = 1.0
    for d in range(1, nmax + 1):
        table[d, 1 : d + 1] += table[d - 1, :d]
        table[d, :d] -= gp[d - 1] * table[d - 1, :d]
    return table


def _newton_to_canonical_matrix(grid: UnisolventGrid) -> np.ndarray:
    if grid._n2c_matrix is None:
        idx = grid.index_set.indices
        size = len(grid.index_set)
        mat = np.ones((size, size))
        for i in range(grid.index_set.m):
            table = _newton1d_factor_table(np.asarray(grid.generating_points[i]))
            # element (row beta, col alpha) scales by the t^beta_i coefficient
            # of the degree-alpha_i factor in dimension i
            mat *= table[idx[None, :, i], idx[:, None, i]]
        mat.setflags(write=False)
        grid._n2c_matrix = mat
    return grid._n2c_matrix


def to_canonical(poly: Polynomial) -> Polynomial:
    """Same polynomial with monomial coefficients in the index set's order."""
    if poly.basis == "canonical":
        return poly
    coeffs = poly.coefficients
    if poly.basis == "lagrange":
        coeffs = solve_triangular(newton_on_grid_matrix(poly.grid), coeffs, lower=True)
    canon = _newton_to_canonical_matrix(poly.grid) @ coeffs
    return Polynomial(poly.index_set, "canonical", canon)


def to_newton(poly: Polynomial, grid: UnisolventGrid | None = None) -> Polynomial:
    """Newton form of a polynomial, on the given grid (default: fresh grid
    over the polynomial's own index set)."""
    if poly.basis == "newton":
        return poly
    if poly.basis == "lagrange":
        grid = poly.grid
        coeffs = solve_triangular(newton_on_grid_matrix(grid), poly.coefficients, lower=True)
        return Polynomial(poly.index_set, "newton", coeffs, grid=grid)
    if grid is None:
        grid = build_grid(poly.index_set)
    if grid.index_set == poly.index_set:
        # the basis-change matrix is triangular in the shared lex order, so
        # one back substitution beats interpolating node values
        coeffs = solve_triangular(
            _newton_to_canonical_matrix(grid), poly.coefficients, lower=False
        )
        return Polynomial(poly.index_set, "newton", coeffs, grid=grid)
    return interpolate(grid, evaluate(poly, grid.nodes))


# -- differentiation ----------------------------------------------------------


def partial_derivative(poly: Polynomial, orders) -> Polynomial:
    """Formal partial derivative of any mixed order, e.g. orders=(1, 0, 2).

    The integer multiplier of each coefficient (a product of falling
    factorials) is accumulated exactly and applied in a single float
    multiplication, so the result is independent of how the requested order
    is split across axes: mixed partials are symmetric bit for bit. The
    result lives on the smallest degree ball (same norm p) covering the
    surviving monomials.
    """
    beta = tuple(int(v) for v in orders)
    if len(beta) != poly.m or any(v < 0 for v in beta):
        raise DomainError(f"bad derivative order {orders!r} for dimension {poly.m}")
    canon = to_canonical(poly)
    idx = canon.index_set.indices
    mask = np.all(idx >= np.asarray(beta, dtype=np.int64), axis=1)
    terms = {}
    for alpha, c in zip(idx[mask].tolist(), canon.coefficients[mask]):
        if c == 0.0:
            continue
        mult = 1
        for a, b in zip(alpha, beta):
            for step in range(b):
                mult *= a - step
        terms[tuple(x - y for x, y in zip(alpha, beta))] = c * float(mult)
    return canonical_polynomial(poly.m, terms, p=canon.index_set.p)


def differentiate(poly: Polynomial, axis: int) -> Polynomial:
    """Exact formal partial derivative along one axis.

    Newton/Lagrange input is converted to canonical form first. Repeated
    single-axis calls round once per call; for mixed partials that must be
    independent of axis order, use partial_derivative, which applies the
    whole integer multiplier in one rounding.
    """
    if not isinstance(axis, (int, np.integer)) or not 0 <= axis < poly.m:
        raise DomainError(f"axis must be in 0..{poly.m - 1}")
    order = [0] * poly.m
    order[axis] = 1
    return partial_derivative(poly, order)


# -- canonical construction and arithmetic ------------------------------------


def canonical_polynomial(m: int, terms: dict, p=2) -> Polynomial:
    """Canonical polynomial from an {exponent tuple: coefficient} mapping,
    realized on the smallest degree ball containing its support."""
    cleaned = {}
    for alpha, c in terms.items():
        key = tuple(int(v) for v in alpha)
        if len(key) != m or any(v < 0 for v in key):
            raise DomainError(f"bad exponent {alpha!r} for dimension {m}")
        cleaned[key] = cleaned.get(key, 0.0) + float(c)
    support = [a for a, c in cleaned.items() if c != 0.0]
    n = covering_degree(support, float(p)) if support else 0
    index_set = build_index_set(m, n, p)
    coeffs = np.zeros(len(index_set))
    for alpha in support:
        coeffs[index_set.position(alpha)] = cleaned[alpha]
    return Polynomial(index_set, "canonical", coeffs)


def coefficients_on(poly: Polynomial, index_set: MultiIndexSet) -> np.ndarray:
    """Canonical coefficients re-aligned onto another index set.

    Fails when the polynomial has support outside the target set.
    """
    canon = to_canonical(poly)
    out = np.zeros(len(index_set))
    for alpha, c in zip(canon.index_set, canon.coefficients):
        if c != 0.0:
            out[index_set.position(alpha)] = c
    return out


def poly_sum(*polys: Polynomial) -> Polynomial:
    """Sum of canonical polynomials over a common (smallest covering) ball."""
    if not polys:
        raise DomainError("nothing to sum")
    m = polys[0].m
    p = polys[0].index_set.p
    terms: dict = {}
    for poly in polys:
        if poly.basis != "canonical":
            raise DomainError("poly_sum operates on canonical polynomials")
        if poly.m != m or poly.index_set.p != p:
            raise DomainError("summands must share dimension and degree norm")
        for alpha, c in zip(poly.index_set, poly.coefficients):
            if c != 0.0:
                terms[alpha] = terms.get(alpha, 0.0) + c
    return canonical_polynomial(m, terms, p=p)


def multiply(a: Polynomial, b: Polynomial) -> Polynomial:
    """Product of two canonical polynomials (sparse convolution of terms)."""
    if a.basis != "canonical" or b.basis != "canonical":
        raise DomainError("multiply operates on canonical polynomials")
    if a.m != b.m or a.index_set.p != b.index_set.p:
        raise DomainError("factors must share dimension and degree norm")
    if a.index_set.p < 1:
        raise DomainError("products require degree norm p >= 1")
    terms: dict = {}
    idx_a = a.index_set.indices
    idx_b = b.index_set.indices
    nz_a = np.nonzero(a.coefficients)[0]
    nz_b = np.nonzero(b.coefficients)[0]
    for ia in nz_a:
        ca = a.coefficients[ia]
        rows = idx_b[nz_b] + idx_a[ia]
        for row, cb in zip(rows.tolist(), b.coefficients[nz_b]):
            key = tuple(row)
            terms[key] = terms.get(key, 0.0) + ca * cb
    return canonical_polynomial(a.m, terms, p=a.index_set.p)
