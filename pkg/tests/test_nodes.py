import math

import numpy as np
import pytest

import gpls
from gpls.errors import DomainError

EULER_GAMMA = 0.5772156649015329


def test_chebyshev_lobatto_small():
    assert np.array_equal(gpls.chebyshev_lobatto(0), [0.0])
    assert np.array_equal(gpls.chebyshev_lobatto(1), [1.0, -1.0])
    assert np.array_equal(gpls.chebyshev_lobatto(2), [1.0, 0.0, -1.0])
    c4 = gpls.chebyshev_lobatto(4)
    assert c4[1] == math.cos(math.pi / 4)
    assert abs(c4[1] - 0.7071067811865476) < 1e-16


def test_chebyshev_lobatto_exact_symmetry():
    for n in (3, 4, 7, 12, 33):
        c = gpls.chebyshev_lobatto(n)
        assert np.array_equal(c, -c[::-1])
        assert np.unique(c).size == c.size


def test_leja_order_examples():
    assert np.array_equal(gpls.leja_order([1.0, 0.0, -1.0]), [1.0, -1.0, 0.0])
    assert np.array_equal(gpls.leja_order([0.5]), [0.5])
    lc4 = gpls.leja_order(gpls.chebyshev_lobatto(4))
    assert set(lc4[:2]) == {1.0, -1.0}
    assert lc4[0] == 1.0  # +1-first tie break


def test_leja_duplicates_rejected():
    with pytest.raises(DomainError):
        gpls.leja_order([0.5, 0.5, 1.0])


@pytest.mark.parametrize("n", range(1, 7))
def test_leja_greedy_maximality(n):
    # re-check both defining clauses step by step against every alternative
    pts = gpls.chebyshev_lobatto(n)
    ordered = gpls.leja_order(pts)
    assert abs(ordered[0]) == np.abs(pts).max()
    for j in range(1, n + 1):
        prod_chosen = np.prod(np.abs(ordered[j] - ordered[:j]))
        for candidate in ordered[j:]:
            assert prod_chosen >= np.prod(np.abs(candidate - ordered[:j])) - 1e-15


def test_grid_1d_total_degree():
    grid = gpls.build_grid(gpls.build_index_set(1, 3, 1))
    expected = gpls.leja_order(gpls.chebyshev_lobatto(3))
    assert np.array_equal(grid.nodes[:, 0], expected)
    # cos(pi/3) is one ulp off 0.5 in double precision
    assert np.abs(grid.nodes[:, 0] - [1.0, -1.0, 0.5, -0.5]).max() <= 1e-15


def test_grid_2d_max_degree():
    grid = gpls.build_grid(gpls.build_index_set(2, 1, math.inf))
    assert np.array_equal(
        grid.nodes, [[1.0, 1.0], [-1.0, 1.0], [1.0, -1.0], [-1.0, -1.0]]
    )


def test_grid_3d_euclidean():
    grid = gpls.build_grid(gpls.build_index_set(3, 2, 2))
    assert len(grid) == 11
    assert np.array_equal(grid.nodes[0], [1.0, 1.0, 1.0])


def test_grid_nodes_distinct():
    for m, n, p in [(2, 3, 1), (3, 2, 2), (3, 3, math.inf)]:
        grid = gpls.build_grid(gpls.build_index_set(m, n, p))
        assert len(np.unique(grid.nodes, axis=0)) == len(grid)


def test_grid_custom_validation():
    A = gpls.build_index_set(2, 1, math.inf)
    with pytest.raises(DomainError):
        gpls.build_grid(A, [[1.0, -1.0]])  # missing one dimension
    with pytest.raises(DomainError):
        gpls.build_grid(A, [[1.0, -1.0], [1.0]])  # wrong length
    with pytest.raises(DomainError):
        gpls.build_grid(A, [[1.0, 1.0], [1.0, -1.0]])  # duplicates
    with pytest.raises(DomainError):
        gpls.build_grid(A, [[1.0, -1.5], [1.0, -1.0]])  # outside [-1, 1]
    custom = gpls.build_grid(A, [[0.5, -0.25], [1.0, -1.0]])
    assert np.array_equal(custom.nodes[1], [-0.25, 1.0])


def test_lagrange_identity_at_nodes():
    for m, n, p in [(1, 8, 1), (2, 4, 2), (3, 3, 2), (3, 2, math.inf)]:
        grid = gpls.build_grid(gpls.build_index_set(m, n, p))
        lag = gpls.lagrange_basis_matrix(grid, grid.nodes)
        assert np.abs(lag - np.eye(len(grid))).max() <= 1e-12


def test_lebesgue_linear_exact():
    grid = gpls.build_grid(gpls.build_index_set(1, 1, 1))
    assert gpls.lebesgue_estimate(grid, 400, seed=0) == 1.0


def test_lebesgue_nested_budgets():
    grid = gpls.build_grid(gpls.build_index_set(2, 3, 2))
    small = gpls.lebesgue_estimate(grid, 200, seed=4)
    large = gpls.lebesgue_estimate(grid, 800, seed=4)
    assert large >= small


@pytest.mark.parametrize("n", [4, 8, 16, 32])
def test_lebesgue_1d_asymptotic(n):
    grid = gpls.build_grid(gpls.build_index_set(1, n, 1))
    est = gpls.lebesgue_estimate(grid, 4096, seed=0)
    ref = (2 / math.pi) * (math.log(n + 1) + EULER_GAMMA + math.log(8 / math.pi))
    assert abs(est - ref) / ref <= 0.15


def test_lebesgue_budget_validation():
    grid = gpls.build_grid(gpls.build_index_set(1, 1, 1))
    with pytest.raises(DomainError):
        gpls.lebesgue_estimate(grid, 0)
