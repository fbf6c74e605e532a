"""Global polynomial level sets.

Reconstructs smooth closed surfaces in R^3 as the zero sets of single
trivariate polynomials, fitted from finite point samples: exactly for point
clouds on low-degree algebraic varieties (through a rank-revealing split of
a Lagrange-basis collocation matrix) and in the least-squares sense for
general smooth surfaces (through a narrow band of relaxed signed
distances). Mean curvature, Gauss curvature, and the fourth-order surface
Laplacian of mean curvature are then evaluated analytically from exact
polynomial derivatives of the fit.
"""

from .errors import (
    ConvergenceError,
    CorankError,
    DataFormatError,
    DegenerateGradientError,
    DomainError,
    GplsError,
    NoVarietyError,
    NumericalError,
    SamplingError,
    UnsupportedOracleError,
)
from .mindex import MultiIndexSet, build_index_set, covering_degree, is_downward_closed, lex_compare
from .nodes import UnisolventGrid, build_grid, chebyshev_lobatto, lebesgue_estimate, leja_order
from .poly import (
    Polynomial,
    canonical_polynomial,
    coefficients_on,
    differentiate,
    evaluate,
    interpolate,
    lagrange_basis_matrix,
    partial_derivative,
    to_canonical,
    to_newton,
)
from .variety import (
    DomainTransform,
    GefpFactorization,
    GplsSurface,
    Vandermonde,
    assemble_vandermonde,
    build_gpls,
    error_bound_report,
    gefp,
    kernel_basis,
    on_variety_lagrange,
)
from .sdfit import NarrowBand, build_band, estimate_normals, fit_sdf, regress_on_surface, regression_errors
from .geom import (
    CurvatureReport,
    SurfaceJet,
    curvature_report,
    gauss_curvature,
    jet_of,
    laplace_beltrami,
    laplacian_mean_curvature,
    mean_curvature,
    project_points,
    project_to_surface,
    surface_gradient,
)
from .surfaces import (
    SurfaceDef,
    SurfaceSample,
    catalog_lookup,
    oracle_curvature,
    oracle_lap_mean_fd,
    oracle_numeric,
    sample_surface,
    sample_synthetic,
)

__version__ = "0.1.0"
