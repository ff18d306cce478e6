"""Mean-zero Poisson solves on the torus: laplacian(v) = g with mean(g) = 0.

The spectral path divides by the Laplacian symbol and pins the zero mode to
zero, giving the unique mean-zero solution.  A dense finite-difference oracle
is provided for cross-validation on small grids.
"""

import math

import numpy as np

from .errors import NonZeroMean, TooLarge
from .torus import ScalarField, _rfft, _irfft, _spectral_ops, integrate

_DENSE_NODE_BUDGET = 4096


def _require_mean_zero(g):
    mean = integrate(g)
    if abs(mean) > 1e-10 * (1.0 + g.sup_norm):
        raise NonZeroMean(f"right-hand side has mean {mean!r}, expected 0")


def solve_mean_zero(g):
    """Unique mean-zero v with laplacian(v) = g (spectral inversion)."""
    _require_mean_zero(g)
    grid = g.grid
    _, _, _, inv = _spectral_ops(grid)
    vh = inv * _rfft(g.values, grid)  # zero mode annihilated by inv
    return ScalarField(grid, _irfft(vh, grid))


def solve_positive(g):
    """Solution of laplacian(v) = g shifted so that min over nodes is 1.

    Constants are harmonic, so the shifted field still solves the equation;
    the min = 1 normalization makes downstream certificates reproducible.
    """
    v = solve_mean_zero(g)
    vals = v.values - v.values.min() + 1.0
    return ScalarField(g.grid, vals)


def _dense_laplacian_matrix(grid):
    """Kronecker-sum assembly of the periodic centered-difference Laplacian."""
    mats = []
    for p, h in zip(grid.shape, grid.spacings):
        d = np.zeros((p, p))
        idx = np.arange(p)
        d[idx, idx] = -2.0
        d[idx, (idx + 1) % p] = 1.0
        d[idx, (idx - 1) % p] = 1.0
        mats.append(d / h ** 2)
    total = math.prod(grid.shape)
    out = np.zeros((total, total))
    for a, d in enumerate(mats):
        term = np.array([[1.0]])
        for b, p in enumerate(grid.shape):
            term = np.kron(term, d if b == a else np.eye(p))
        out += term
    return out


def solve_dense_oracle(g):
    """Independent dense FD solve with a mean-zero constraint (tiny grids).

    Agrees with `solve_mean_zero` at O(h^2) on smooth data.
    """
    grid = g.grid
    if grid.node_count > _DENSE_NODE_BUDGET:
        raise TooLarge(
            f"{grid.node_count} nodes exceed the dense budget of {_DENSE_NODE_BUDGET}")
    _require_mean_zero(g)
    total = grid.node_count
    a = _dense_laplacian_matrix(grid)
    # saddle system [[A, 1], [1^T, 0]] pins the mean of the solution
    aug = np.zeros((total + 1, total + 1))
    aug[:total, :total] = a
    aug[:total, total] = 1.0
    aug[total, :total] = 1.0
    rhs = np.zeros(total + 1)
    rhs[:total] = g.values.ravel()
    sol = np.linalg.solve(aug, rhs)
    return ScalarField(grid, sol[:total].reshape(grid.shape))
