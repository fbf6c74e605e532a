import math

import numpy as np
import pytest

import gpls
from gpls.errors import DomainError, UnsupportedOracleError


def test_sphere_polynomial_coefficients(sphere_def):
    coeffs = {a: c for a, c in zip(sphere_def.polynomial.index_set, sphere_def.polynomial.coefficients) if c}
    assert coeffs == {(0, 0, 0): -1.0, (2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): 1.0}
    assert sphere_def.degree == 2


def test_torus_contains_outer_equator_point(torus_def):
    assert abs(torus_def.polynomial(np.array([0.8, 0.0, 0.0]))) <= 1e-15
    assert torus_def.degree == 4


def test_biconcave_degree_and_membership():
    sdef = gpls.catalog_lookup("biconcave", {"d": 0.5, "c": 0.375})
    assert sdef.degree == 6
    A = gpls.build_index_set(3, 6, 2)
    support = [a for a, c in zip(sdef.polynomial.index_set, sdef.polynomial.coefficients) if c]
    assert all(a in A for a in support)
    assert max(sum(a) for a in support) == 6


def test_catalog_polynomials_fit_recommended_space():
    for name, params in [
        ("ellipsoid", {"a": 0.8, "b": 0.9, "c": 1.0}),
        ("biconcave", {"d": 0.5, "c": 0.375}),
        ("torus", {"R": 0.5, "r": 0.3}),
        ("genus2", {}),
        ("klein", {}),
    ]:
        sdef = gpls.catalog_lookup(name, params)
        target = gpls.build_index_set(3, sdef.degree, sdef.lp)
        gpls.coefficients_on(sdef.polynomial, target)  # raises if support leaks


def test_genus2_euclidean_degree_four():
    sdef = gpls.catalog_lookup("genus2", {})
    support = [a for a, c in zip(sdef.polynomial.index_set, sdef.polynomial.coefficients) if c]
    # total degree exceeds 4 but the Euclidean degree does not
    assert max(sum(a) for a in support) == 5
    assert all(sum(v * v for v in a) <= 16 for a in support)
    assert sdef.degree == 4


def test_invalid_parameters():
    with pytest.raises(DomainError, match="r < R"):
        gpls.catalog_lookup("torus", {"R": 0.3, "r": 0.3})
    with pytest.raises(DomainError, match="c < d"):
        gpls.catalog_lookup("biconcave", {"d": 0.3, "c": 0.4})
    with pytest.raises(DomainError):
        gpls.catalog_lookup("ellipsoid", {"a": 0.0})
    with pytest.raises(DomainError, match="unknown surface"):
        gpls.catalog_lookup("dragon", {})
    with pytest.raises(DomainError, match="unknown parameter"):
        gpls.catalog_lookup("torus", {"R": 0.5, "r": 0.3, "q": 1.0})


def test_sampler_residuals(sphere_def, torus_def):
    sphere = gpls.sample_surface(sphere_def, 50, seed=7)
    assert len(sphere.points) == 50
    assert np.abs(sphere_def.polynomial(sphere.points)).max() <= 1e-13
    torus = gpls.sample_surface(torus_def, 100, seed=1)
    assert np.abs(torus_def.polynomial(torus.points)).max() <= 1e-12


def test_sampler_klein_count():
    sdef = gpls.catalog_lookup("klein", {})
    sample = gpls.sample_surface(sdef, 200, seed=9)
    assert len(sample.points) == 200
    assert np.abs(sdef.polynomial(sample.points)).max() <= 1e-12
    # normals zeroed wherever the gradient was too small, listed in flagged
    if sample.flagged.size:
        assert np.all(sample.normals[sample.flagged] == 0.0)


def test_sampler_determinism(torus_def):
    a = gpls.sample_surface(torus_def, 60, seed=123)
    b = gpls.sample_surface(torus_def, 60, seed=123)
    assert np.array_equal(a.points, b.points)
    assert np.array_equal(a.normals, b.normals)
    c = gpls.sample_surface(torus_def, 60, seed=124)
    assert not np.array_equal(a.points, c.points)


def test_sampler_normals_match_gradient(sphere_def):
    sample = gpls.sample_surface(sphere_def, 30, seed=3)
    grads = np.stack(
        [gpls.differentiate(sphere_def.polynomial, i)(sample.points) for i in range(3)],
        axis=-1,
    )
    grads /= np.linalg.norm(grads, axis=1, keepdims=True)
    assert np.abs(grads - sample.normals).max() <= 1e-12


def test_sampler_points_inside_cube():
    for name in ("genus2", "klein"):
        sample = gpls.sample_surface(gpls.catalog_lookup(name, {}), 100, seed=2)
        assert np.abs(sample.points).max() <= 1.0 + 1e-9


def test_oracle_sphere(sphere_def):
    k_mean, k_gauss = gpls.oracle_curvature(sphere_def, np.array([0.0, 0.0, 1.0]))
    assert k_mean == pytest.approx(1.0, abs=1e-14)
    assert k_gauss == pytest.approx(1.0, abs=1e-14)


def test_oracle_torus_outer_equator(torus_def):
    k_mean, k_gauss = gpls.oracle_curvature(torus_def, np.array([0.8, 0.0, 0.0]))
    assert k_mean == pytest.approx(1.1 / 0.48, abs=1e-12)
    assert k_gauss == pytest.approx(1.0 / 0.24, abs=1e-12)


def test_oracle_spheroid_pole():
    sdef = gpls.catalog_lookup("ellipsoid", {"a": 1.0, "b": 1.0, "c": 0.6})
    k_mean, k_gauss = gpls.oracle_curvature(sdef, np.array([0.0, 0.0, 0.6]))
    # principal curvatures at the pole are both c/a^2
    assert k_mean == pytest.approx(0.6, abs=1e-13)
    assert k_gauss == pytest.approx(0.36, abs=1e-13)


def test_oracle_unsupported():
    biconcave = gpls.catalog_lookup("biconcave", {"d": 0.5, "c": 0.375})
    with pytest.raises(UnsupportedOracleError):
        gpls.oracle_curvature(biconcave, np.zeros(3))
    klein = gpls.catalog_lookup("klein", {})
    with pytest.raises(UnsupportedOracleError):
        gpls.oracle_curvature(klein, np.zeros(3))
    with pytest.raises(UnsupportedOracleError):
        gpls.oracle_numeric(klein, np.zeros(3), "mean")


def test_oracle_numeric_sphere_lap(sphere_def):
    sample = gpls.sample_surface(sphere_def, 20, seed=5)
    lap = gpls.oracle_numeric(sphere_def, sample.points, "lap_mean")
    assert np.abs(lap).max() <= 1e-10


def test_oracle_numeric_is_geom_on_exact_polynomial():
    sdef = gpls.catalog_lookup("genus2", {})
    sample = gpls.sample_surface(sdef, 20, seed=6)
    jet = gpls.jet_of(sdef.as_surface())
    direct = gpls.mean_curvature(jet, sample.points)
    assert np.array_equal(gpls.oracle_numeric(sdef, sample.points, "mean"), direct)


def test_oracle_paths_agree_on_ellipsoid():
    sdef = gpls.catalog_lookup("ellipsoid", {"a": 1.0, "b": 1.0, "c": 0.6})
    sample = gpls.sample_surface(sdef, 50, seed=8)
    closed_mean, closed_gauss = gpls.oracle_curvature(sdef, sample.points)
    numeric_mean = gpls.oracle_numeric(sdef, sample.points, "mean")
    numeric_gauss = gpls.oracle_numeric(sdef, sample.points, "gauss")
    assert np.abs(np.abs(numeric_mean) - closed_mean).max() <= 1e-11
    assert np.abs(numeric_gauss - closed_gauss).max() <= 1e-11


def test_lap_mean_fd_cross_check_ellipsoid():
    sdef = gpls.catalog_lookup("ellipsoid", {"a": 1.0, "b": 1.0, "c": 0.6})
    sample = gpls.sample_surface(sdef, 60, seed=9)
    pts = sample.points
    # the 1D reduction divides by sin(u); stay away from the poles
    keep = np.hypot(pts[:, 0], pts[:, 1]) > 0.15
    analytic = gpls.oracle_numeric(sdef, pts[keep], "lap_mean")
    fd = gpls.oracle_lap_mean_fd(sdef, pts[keep])
    assert np.abs(np.abs(analytic) - fd).max() <= 1e-6


def test_lap_mean_fd_cross_check_torus(torus_def):
    sample = gpls.sample_surface(torus_def, 40, seed=10)
    analytic = gpls.oracle_numeric(torus_def, sample.points, "lap_mean")
    fd = gpls.oracle_lap_mean_fd(torus_def, sample.points)
    assert np.abs(np.abs(analytic) - fd).max() <= 1e-6


def test_synthetic_radii_range():
    sample = gpls.sample_synthetic(4000, seed=1)
    radii = np.linalg.norm(sample.points, axis=1)
    assert radii.min() >= 0.6 - 1e-12
    assert radii.max() <= 0.8 + 1e-12


def test_synthetic_determinism():
    a = gpls.sample_synthetic(100, seed=3)
    b = gpls.sample_synthetic(100, seed=3)
    assert np.array_equal(a.points, b.points)
    assert np.array_equal(a.normals, b.normals)


def test_synthetic_normals_match_finite_differences():
    rng = np.random.default_rng(4)
    theta = rng.uniform(0.3, math.pi - 0.3, 50)
    phi = rng.uniform(0.0, 2 * math.pi, 50)
    pts, normals = gpls.surfaces.synthetic_point(theta, phi)
    h = 1e-6
    p_t_plus, _ = gpls.surfaces.synthetic_point(theta + h, phi)
    p_t_minus, _ = gpls.surfaces.synthetic_point(theta - h, phi)
    p_p_plus, _ = gpls.surfaces.synthetic_point(theta, phi + h)
    p_p_minus, _ = gpls.surfaces.synthetic_point(theta, phi - h)
    tang_t = (p_t_plus - p_t_minus) / (2 * h)
    tang_p = (p_p_plus - p_p_minus) / (2 * h)
    fd_normals = np.cross(tang_t, tang_p)
    fd_normals /= np.linalg.norm(fd_normals, axis=1, keepdims=True)
    flip = np.einsum("ni,ni->n", fd_normals, normals) < 0
    fd_normals[flip] *= -1
    assert np.abs(fd_normals - normals).max() <= 1e-8


def test_sample_count_validation(sphere_def):
    with pytest.raises(DomainError):
        gpls.sample_surface(sphere_def, 0, seed=1)
    with pytest.raises(DomainError):
        gpls.sample_synthetic(0, seed=1)
