#!/usr/bin/env python3
"""Index sets, unisolvent grids, and multivariate interpolation.

Walks through the building blocks underneath every surface fit: degree
balls for three norms, the Leja-ordered Chebyshev-Lobatto grid they
generate, interpolation of a smooth function with spectral-looking decay,
and the empirical Lebesgue constant that controls error amplification.
"""

import math

import numpy as np

import gpls

# --- degree balls for the three norms -------------------------------------
# The same degree bound n spans very different spaces depending on the norm:
# total degree (p=1) is smallest, maximum degree (p=inf) largest, Euclidean
# degree (p=2) sits in between and is usually the sweet spot for smooth data.
for n in (2, 4, 8):
    sizes = {p: len(gpls.build_index_set(3, n, p)) for p in (1, 2, math.inf)}
    print(f"n={n}: |A(p=1)|={sizes[1]:4d}  |A(p=2)|={sizes[2]:4d}  |A(p=inf)|={sizes[math.inf]:4d}")

# --- the grid behind the Lagrange basis ------------------------------------
A = gpls.build_index_set(3, 2, 2)
grid = gpls.build_grid(A)
print(f"\ngrid for A(3,2,2): {len(grid)} nodes; first generating tuple:",
      np.round(grid.generating_points[0], 6))

# the Lagrange basis evaluates to the identity on its own nodes
delta = np.abs(gpls.lagrange_basis_matrix(grid, grid.nodes) - np.eye(len(grid))).max()
print("max |L_a(p_b) - delta_ab| =", delta)

# --- interpolation of the Runge function ------------------------------------
runge = lambda pts: 1.0 / (1.0 + (pts**2).sum(axis=1))
rng = np.random.default_rng(0)
probe = rng.uniform(-1, 1, (2000, 3))
print("\nRunge interpolation error over the cube (Euclidean degree):")
for n in (2, 4, 6, 8, 10, 12):
    g = gpls.build_grid(gpls.build_index_set(3, n, 2))
    interp = gpls.interpolate(g, runge(g.nodes))
    err = np.abs(interp(probe) - runge(probe)).max()
    print(f"  n={n:2d}  |A|={len(g):4d}  max error = {err:.3e}")

# --- Lebesgue constants -------------------------------------------------------
# Sampled lower bounds; the 1D values track the known logarithmic growth of
# Chebyshev-Lobatto nodes.
print("\nLebesgue constant estimates:")
for n in (4, 8, 16, 32):
    g = gpls.build_grid(gpls.build_index_set(1, n, 1))
    est = gpls.lebesgue_estimate(g, 4096, seed=0)
    ref = (2 / math.pi) * (math.log(n + 1) + 0.5772156649015329 + math.log(8 / math.pi))
    print(f"  1D Cheb_{n:2d}: estimate {est:.4f} vs asymptotic {ref:.4f}")
g3 = gpls.build_grid(gpls.build_index_set(3, 4, 2))
print(f"  3D n=4 p=2 grid: estimate {gpls.lebesgue_estimate(g3, 2048, seed=0):.3f}")
