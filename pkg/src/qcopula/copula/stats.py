"""Dependence statistics evaluated exactly on copula grids.

Variable indices are 1-based, matching the ``{1..n}`` labels of partitions.
"""

from __future__ import annotations

import numpy as np

from .grids import CopulaGrid


def cqep_b11(p: float, alpha: float) -> float:
    """Conditional quantile exceedance probability of the B11 copula."""
    return 1 - p * (1 - alpha)


def _upper(grid: CopulaGrid, q_index: int) -> slice:
    if not 0 <= q_index < grid.size:
        raise ValueError(f"q_index must lie in [0, {grid.size})")
    return slice(q_index, None)


def grid_cqep(grid: CopulaGrid, i: int, j: int, q_index: int) -> float:
    """``P(Xi >= q, Xj >= q) / P(Xj >= q)`` with ``q = q_index / 2^k``."""
    up = _upper(grid, q_index)
    pair = grid.pair(i, j)
    joint = pair[up, up].sum()
    return float(joint / pair[:, up].sum())


def grid_cqep3(grid: CopulaGrid, q_index: int) -> float:
    """``P(X1 >= q, X2 >= q | X3 >= q)`` on a trivariate grid."""
    if grid.n != 3:
        raise ValueError("grid_cqep3 needs a trivariate grid")
    up = _upper(grid, q_index)
    joint = grid.cells[up, up, up].sum()
    return float(joint / grid.cells[:, :, up].sum())


def _midranks(margin: np.ndarray) -> np.ndarray:
    below = np.concatenate([[0.0], np.cumsum(margin)[:-1]])
    return below + margin / 2


def grid_spearman(grid: CopulaGrid, i: int, j: int) -> float:
    """Spearman's rho of two grid variables using mid-rank grades.

    Each cell's grade is ``P(X < c) + P(X = c)/2``; rho is the Pearson
    correlation of the grades under the cell probabilities.
    """
    pair = grid.pair(i, j)
    mi, mj = pair.sum(axis=1), pair.sum(axis=0)
    gi, gj = _midranks(mi), _midranks(mj)
    ei, ej = mi @ gi, mj @ gj
    cov = gi @ pair @ gj - ei * ej
    vi = mi @ gi**2 - ei**2
    vj = mj @ gj**2 - ej**2
    return float(cov / np.sqrt(vi * vj))
