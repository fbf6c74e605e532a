import numpy as np
import pytest

import gpls
from gpls.errors import CorankError, DomainError, NoVarietyError
from gpls.variety import kernel_coefficient_vectors


def svd_rank(matrix, tol=1e-8):
    """Independent rank oracle: singular values above tol * sigma_max."""
    sigma = np.linalg.svd(matrix, compute_uv=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int((sigma > tol * sigma[0]).sum())


def test_vandermonde_identity_at_nodes():
    grid = gpls.build_grid(gpls.build_index_set(3, 2, 2))
    vand = gpls.assemble_vandermonde(grid, grid.nodes)
    assert np.abs(vand.entries - np.eye(len(grid))).max() <= 1e-12


def test_vandermonde_single_point_constant_space():
    grid = gpls.build_grid(gpls.build_index_set(3, 0, 1))
    vand = gpls.assemble_vandermonde(grid, np.array([[0.2, -0.3, 0.4]]))
    assert vand.entries.shape == (1, 1)
    assert vand.entries[0, 0] == 1.0


def test_vandermonde_rejects_outside_points():
    grid = gpls.build_grid(gpls.build_index_set(3, 2, 2))
    bad = np.array([[0.0, 0.0, 0.0], [1.5, 0.0, 0.0]])
    with pytest.raises(DomainError, match="point 1"):
        gpls.assemble_vandermonde(grid, bad)


def test_sphere_vandermonde_rank(sphere_sample):
    grid = gpls.build_grid(gpls.build_index_set(3, 2, 2))
    vand = gpls.assemble_vandermonde(grid, sphere_sample.points)
    assert vand.entries.shape == (50, 11)
    fact = gpls.gefp(vand)
    assert fact.rank == 10 == svd_rank(vand.entries)
    assert fact.corank == 1


def test_gefp_identity():
    fact = gpls.gefp(np.eye(5))
    assert fact.rank == 5
    assert np.array_equal(fact.row_perm, np.arange(5))
    assert np.array_equal(fact.col_perm, np.arange(5))
    assert np.array_equal(fact.lower, np.eye(5))
    assert np.array_equal(fact.upper, np.eye(5))


def test_gefp_rank_one_outer_product():
    rng = np.random.default_rng(2)
    mat = np.outer(rng.normal(size=20), rng.normal(size=30))
    fact = gpls.gefp(mat)
    assert fact.rank == 1 == svd_rank(mat)


def test_gefp_all_zero():
    fact = gpls.gefp(np.zeros((4, 6)))
    assert fact.rank == 0
    assert fact.lower.shape == (4, 0)
    assert fact.upper.shape == (0, 6)
    # the kernel is the whole coefficient space
    kernel = kernel_coefficient_vectors(fact)
    assert kernel.shape == (6, 6)
    assert np.array_equal(kernel, np.eye(6))


def test_gefp_reconstruction_and_pivots(sphere_sample, torus_sample):
    cases = []
    grid2 = gpls.build_grid(gpls.build_index_set(3, 2, 2))
    cases.append(gpls.assemble_vandermonde(grid2, sphere_sample.points).entries)
    grid4 = gpls.build_grid(gpls.build_index_set(3, 4, 2))
    cases.append(gpls.assemble_vandermonde(grid4, torus_sample.points).entries)
    rng = np.random.default_rng(4)
    cases.append(rng.normal(size=(12, 8)))
    for mat in cases:
        fact = gpls.gefp(mat)
        permuted = mat[fact.row_perm][:, fact.col_perm]
        recon = fact.lower @ fact.upper
        assert np.abs(permuted - recon).max() <= 1e-10 * np.abs(mat).max()
        pivots = fact.pivot_magnitudes
        # full pivoting allows bounded growth, so the sequence need not be
        # monotone; the rank-separation properties are what matters
        assert pivots[0] == np.abs(mat).max()
        assert np.all(pivots > 1e-8 * pivots[0])
        assert np.all(pivots <= 2.0 ** np.arange(len(pivots)) * pivots[0])
        if fact.stopped_pivot is not None:
            assert fact.stopped_pivot <= 1e-8 * pivots[0]


def test_gefp_rank_matches_svd_oracle_on_bench_surfaces():
    for name, params, n, count in [
        ("ellipsoid", {"a": 0.8, "b": 0.9, "c": 1.0}, 2, 50),
        ("torus", {"R": 0.5, "r": 0.3}, 4, 100),
        ("genus2", {}, 4, 100),
    ]:
        sdef = gpls.catalog_lookup(name, params)
        sample = gpls.sample_surface(sdef, count, seed=13)
        grid = gpls.build_grid(gpls.build_index_set(3, n, 2))
        vand = gpls.assemble_vandermonde(grid, sample.points)
        assert gpls.gefp(vand).rank == svd_rank(vand.entries)


def test_kernel_vanishes_and_matches_sphere(sphere_sample):
    grid = gpls.build_grid(gpls.build_index_set(3, 2, 2))
    vand = gpls.assemble_vandermonde(grid, sphere_sample.points)
    fact = gpls.gefp(vand)
    kernels = gpls.kernel_basis(fact)
    assert len(kernels) == 1
    vals = kernels[0](sphere_sample.points)
    assert np.abs(vals).max() <= 1e-10 * np.abs(kernels[0].coefficients).max()
    canon = gpls.to_canonical(kernels[0])
    truth = gpls.canonical_polynomial(
        3, {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): 1.0, (0, 0, 0): -1.0}
    )
    truth_vec = gpls.coefficients_on(truth, canon.index_set)
    lead = np.argmax(np.abs(canon.coefficients))
    scaled = canon.coefficients * (truth_vec[lead] / canon.coefficients[lead])
    assert np.abs(scaled - truth_vec).max() <= 1e-10


def test_kernel_empty_for_unisolvent_points():
    grid = gpls.build_grid(gpls.build_index_set(3, 2, 2))
    vand = gpls.assemble_vandermonde(grid, grid.nodes)
    assert gpls.kernel_basis(gpls.gefp(vand)) == []


def test_kernel_proportional_between_disjoint_samples(sphere_def):
    A = gpls.build_index_set(3, 2, 2)
    grid = gpls.build_grid(A)
    kerns = []
    for seed in (31, 32):
        sample = gpls.sample_surface(sphere_def, 50, seed=seed)
        fact = gpls.gefp(gpls.assemble_vandermonde(grid, sample.points))
        canon = gpls.to_canonical(gpls.kernel_basis(fact)[0])
        kerns.append(canon.coefficients / np.abs(canon.coefficients).max())
    a, b = kerns
    if np.sign(a[np.argmax(np.abs(a))]) != np.sign(b[np.argmax(np.abs(b))]):
        b = -b
    assert np.abs(a - b).max() <= 1e-9


def test_on_variety_lagrange_at_grid_nodes():
    grid = gpls.build_grid(gpls.build_index_set(3, 2, 2))
    vand = gpls.assemble_vandermonde(grid, grid.nodes)
    fact = gpls.gefp(vand)
    anchors = gpls.on_variety_lagrange(fact)
    assert len(anchors) == len(grid)
    for i, poly in enumerate(anchors):
        vals = poly(grid.nodes[fact.row_perm])
        expected = np.zeros(len(grid))
        expected[i] = 1.0
        assert np.abs(vals - expected).max() <= 1e-12


def test_on_variety_lagrange_single_point():
    grid = gpls.build_grid(gpls.build_index_set(3, 1, 1))
    vand = gpls.assemble_vandermonde(grid, np.array([[0.1, 0.2, 0.3]]))
    fact = gpls.gefp(vand)
    assert fact.rank == 1
    anchor = gpls.on_variety_lagrange(fact)[0]
    assert abs(anchor(np.array([0.1, 0.2, 0.3])) - 1.0) <= 1e-12


def test_on_variety_lagrange_sphere(sphere_sample):
    grid = gpls.build_grid(gpls.build_index_set(3, 2, 2))
    vand = gpls.assemble_vandermonde(grid, sphere_sample.points)
    fact = gpls.gefp(vand)
    anchors = gpls.on_variety_lagrange(fact)
    assert len(anchors) == 10
    anchor_pts = sphere_sample.points[fact.row_perm[: fact.rank]]
    for i, poly in enumerate(anchors):
        vals = poly(anchor_pts)
        expected = np.zeros(fact.rank)
        expected[i] = 1.0
        assert np.abs(vals - expected).max() <= 1e-9


def test_build_gpls_sphere(sphere_fit, sphere_sample):
    assert sphere_fit.rank == 10
    assert sphere_fit.corank == 1
    assert np.abs(sphere_fit.q.coefficients).max() == 1.0
    assert sphere_fit.fit_report["max_residual"] <= 1e-12
    assert len(sphere_fit.anchor_indices) == 10
    _, dist, conv = gpls.project_points(sphere_fit, sphere_sample.points)
    assert conv.all()
    assert dist.max() <= 1e-12


def test_build_gpls_corank_errors(sphere_sample):
    grid = gpls.build_grid(gpls.build_index_set(3, 2, 2))
    with pytest.raises(NoVarietyError):
        gpls.build_gpls(grid.nodes, grid.index_set)
    with pytest.raises(CorankError) as info:
        gpls.build_gpls(sphere_sample.points, gpls.build_index_set(3, 3, 2))
    assert info.value.corank == 4


def test_build_gpls_modes_agree(sphere_sample):
    A = gpls.build_index_set(3, 2, 2)
    kernel_fit = gpls.build_gpls(sphere_sample.points, A, mode="kernel-corank1")
    lagr_fit = gpls.build_gpls(sphere_sample.points, A, mode="lagrange-sum")
    assert lagr_fit.fit_report["max_residual"] <= 1e-10
    rng = np.random.default_rng(8)
    raw = rng.uniform(-1, 1, (100, 3))
    on_lagr, _, conv = gpls.project_points(lagr_fit, raw)
    assert np.abs(kernel_fit(on_lagr[conv])).max() <= 1e-9


def test_degree_raising_invariance(sphere_fit, sphere_sample):
    bigger = gpls.build_gpls(sphere_sample.points, gpls.build_index_set(3, 3, 2), mode="lagrange-sum")
    rng = np.random.default_rng(12)
    raw = rng.uniform(-1, 1, (200, 3))
    proj, _, conv = gpls.project_points(sphere_fit, raw)
    proj = proj[conv]
    for kernel in bigger.kernel_basis:
        scale = max(np.abs(kernel.coefficients).max(), 1.0)
        assert np.abs(kernel(proj)).max() <= 1e-8 * scale


def test_sample_invariance(sphere_def, sphere_fit):
    other = gpls.sample_surface(sphere_def, 50, seed=99)
    fit2 = gpls.build_gpls(other.points, gpls.build_index_set(3, 2, 2))
    rng = np.random.default_rng(15)
    raw = rng.uniform(-1, 1, (100, 3))
    on_two, _, conv = gpls.project_points(fit2, raw)
    assert np.abs(sphere_fit(on_two[conv])).max() <= 1e-8


def test_leading_sign_convention(sphere_fit, torus_fit):
    # the lex-largest genuinely nonzero coefficient is positive
    for surf in (sphere_fit, torus_fit):
        coeffs = surf.q.coefficients
        nz = np.nonzero(np.abs(coeffs) > 1e-8 * np.abs(coeffs).max())[0]
        assert coeffs[nz[-1]] > 0


def test_error_bound_report(sphere_fit):
    report = gpls.error_bound_report(
        sphere_fit.grid, sphere_fit.factorization, lebesgue_budget=256, seed=3
    )
    assert report["pseudoinverse_inf_norm"] > 0
    assert report["lebesgue_lower_bound"] >= 1.0
    assert report["amplification_factor"] == 1.0 + (
        report["lebesgue_lower_bound"] * report["pseudoinverse_inf_norm"]
    )
    again = gpls.error_bound_report(
        sphere_fit.grid, sphere_fit.factorization, lebesgue_budget=256, seed=3
    )
    assert report == again  # deterministic given the seed


def test_error_bound_unisolvent_norm_one():
    grid = gpls.build_grid(gpls.build_index_set(3, 2, 2))
    fact = gpls.gefp(gpls.assemble_vandermonde(grid, grid.nodes))
    report = gpls.error_bound_report(grid, fact, lebesgue_budget=64, seed=0)
    assert abs(report["pseudoinverse_inf_norm"] - 1.0) <= 1e-9


def test_transform_roundtrip_and_auto():
    tr = gpls.DomainTransform(2.0, np.array([1.0, -1.0, 0.5]))
    pts = np.array([[3.0, -1.0, 0.5], [1.0, 1.0, 2.5]])
    assert np.allclose(tr.to_user(tr.to_domain(pts)), pts)
    inside = np.array([[0.5, 0.5, 0.5]])
    assert gpls.DomainTransform.auto(inside).is_identity
    outside = np.array([[5.0, 0.0, 0.0], [-5.0, 0.0, 0.0]])
    fitted = gpls.DomainTransform.auto(outside)
    assert not fitted.is_identity
    mapped = fitted.to_domain(outside)
    assert np.abs(mapped).max() <= 0.95 + 1e-12


def test_build_gpls_scaled_cloud(sphere_sample):
    user = sphere_sample.points * 4.0 + np.array([7.0, -2.0, 3.0])
    surf = gpls.build_gpls(user, gpls.build_index_set(3, 2, 2))
    _, dist, conv = gpls.project_points(surf, user)
    assert conv.all()
    assert dist.max() <= 1e-11  # user units, scale 4ish
    jet = gpls.jet_of(surf)
    k = gpls.gauss_curvature(jet, user[0])
    assert abs(k - 1.0 / 16.0) <= 1e-10
