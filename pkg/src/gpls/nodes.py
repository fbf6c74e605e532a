"""Interpolation nodes: Leja-ordered Chebyshev-Lobatto tuples and the
non-tensorial grids they generate, plus an empirical Lebesgue constant.

A grid assigns one node to every multi-index: p_alpha picks the alpha_i-th
entry of the i-th generating tuple in each dimension. With Leja-ordered
Chebyshev-Lobatto generating tuples these node sets support numerically
stable interpolation on the cube [-1, 1]^m.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import qmc

from .errors import DomainError
from .mindex import MultiIndexSet

__all__ = [
    "UnisolventGrid",
    "build_grid",
    "chebyshev_lobatto",
    "leja_order",
    "lebesgue_estimate",
]


def chebyshev_lobatto(n: int) -> np.ndarray:
    """Chebyshev-Lobatto points cos(k*pi/n), k = 0..n, descending from +1.

    Mirrored construction keeps the tuple exactly symmetric in floating
    point (x[n-k] == -x[k]), which makes later Leja tie-breaking exact.
    Degree 0 returns the single center node {0}.
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise DomainError("node degree must be a non-negative integer")
    if n == 0:
        return np.zeros(1)
    x = np.empty(n + 1)
    for k in range(n // 2 + 1):
        v = math.cos(math.pi * k / n)
        x[k] = v
        x[n - k] = -v
    if n % 2 == 0:
        x[n // 2] = 0.0
    return x


def leja_order(points) -> np.ndarray:
    """Greedy Leja permutation of a 1D node tuple.

    The first node maximizes |p|; each later node maximizes the product of
    distances to all previously chosen ones. Exact ties prefer the larger
    point value, so +1 comes before -1 on Chebyshev-Lobatto input and the
    result is reproducible bit for bit.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    if pts.ndim != 1:
        raise DomainError("expected a 1D node tuple")
    if np.unique(pts).size != pts.size:
        raise DomainError("node tuple contains duplicate points")
    remaining = list(range(pts.size))
    first = max(remaining, key=lambda i: (abs(pts[i]), pts[i]))
    order = [first]
    remaining.remove(first)
    prod = np.abs(pts - pts[first])
    while remaining:
        nxt = max(remaining, key=lambda i: (prod[i], pts[i]))
        order.append(nxt)
        remaining.remove(nxt)
        prod *= np.abs(pts - pts[nxt])
    return pts[order]


class UnisolventGrid:
    """Nodes p_alpha = (P_1[alpha_1], ..., P_m[alpha_m]) for an index set.

    ``generating_points`` holds the per-dimension node tuples P_i (length
    n_i + 1 with n_i the per-dimension degree maximum); ``nodes`` lists one
    point per index, aligned with the index set's order. Immutable after
    construction.
    """

    def __init__(self, index_set: MultiIndexSet, generating_points):
        if len(generating_points) != index_set.m:
            raise DomainError(
                f"need {index_set.m} generating tuples, got {len(generating_points)}"
            )
        gps = []
        for i, (gp, ni) in enumerate(zip(generating_points, index_set.max_degrees)):
            arr = np.atleast_1d(np.asarray(gp, dtype=float)).copy()
            if arr.size != ni + 1:
                raise DomainError(
                    f"dimension {i}: expected {ni + 1} generating points, got {arr.size}"
                )
            if np.unique(arr).size != arr.size:
                raise DomainError(f"dimension {i}: generating points contain duplicates")
            if np.any(np.abs(arr) > 1.0):
                raise DomainError(f"dimension {i}: generating points must lie in [-1, 1]")
            arr.setflags(write=False)
            gps.append(arr)
        self.index_set = index_set
        self.generating_points = tuple(gps)
        nodes = np.column_stack(
            [gps[i][index_set.indices[:, i]] for i in range(index_set.m)]
        )
        nodes.setflags(write=False)
        self.nodes = nodes
        # caches filled lazily by the poly module
        self._newton_matrix = None
        self._n2c_matrix = None

    def __len__(self) -> int:
        return self.nodes.shape[0]

    def __repr__(self) -> str:
        return f"UnisolventGrid({self.index_set!r})"


def build_grid(index_set: MultiIndexSet, generating_points=None) -> UnisolventGrid:
    """Grid for an index set; default generating tuples are Leja-ordered
    Chebyshev-Lobatto nodes, or pass custom distinct tuples per dimension."""
    if generating_points is None:
        generating_points = [
            leja_order(chebyshev_lobatto(int(ni))) for ni in index_set.max_degrees
        ]
    return UnisolventGrid(index_set, generating_points)


def lebesgue_estimate(grid: UnisolventGrid, sample_budget: int = 2048, seed: int = 0) -> float:
    """Sampled lower bound on the Lebesgue constant of a grid.

    Takes the maximum of sum_alpha |L_alpha(x)| over ``sample_budget``
    Halton points in the cube plus the grid nodes themselves. This is a
    lower bound on the true supremum, never an upper one; deterministic
    for a given seed, and nested in the budget (a larger budget extends
    the same point sequence).
    """
    if sample_budget < 1:
        raise DomainError("sample_budget must be at least 1")
    from .poly import lagrange_basis_matrix  # deferred: poly imports this module

    engine = qmc.Halton(d=grid.index_set.m, seed=seed)
    xs = 2.0 * engine.random(int(sample_budget)) - 1.0
    pts = np.vstack([xs, grid.nodes])
    lag = lagrange_basis_matrix(grid, pts)
    return float(np.abs(lag).sum(axis=1).max())
