"""Discretized copulas on a dyadic grid with ``2^k`` cells per axis."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .partitions import SetPartition

MAX_GRID_BITS = 24
CLAMP_TOL = 1e-12


class GridError(ValueError):
    pass


class MarginError(GridError):
    """A grid whose axis marginals are not uniform."""


@dataclass(frozen=True)
class CopulaGrid:
    """Cell probabilities ``cells[c1, ..., cn]`` with cell ``c`` covering ``[c/2^k, (c+1)/2^k)``."""

    n: int
    k: int
    cells: np.ndarray

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=float)
        if cells.shape != (2**self.k,) * self.n:
            raise GridError(f"cells shape {cells.shape} does not match n={self.n}, k={self.k}")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_array(cls, cells) -> "CopulaGrid":
        cells = np.asarray(cells, dtype=float)
        side = cells.shape[0]
        k = side.bit_length() - 1
        if 2**k != side or any(s != side for s in cells.shape):
            raise GridError(f"cells must be a hypercube with side 2^k, got {cells.shape}")
        return cls(cells.ndim, k, cells)

    @property
    def size(self) -> int:
        return 2**self.k

    def marginal(self, i: int) -> np.ndarray:
        """Marginal of variable ``i`` (1-based)."""
        axes = tuple(a for a in range(self.n) if a != i - 1)
        return self.cells.sum(axis=axes) if axes else self.cells

    def pair(self, i: int, j: int) -> np.ndarray:
        """Bivariate marginal of variables ``i, j`` (1-based), indexed ``[ci, cj]``."""
        axes = tuple(a for a in range(self.n) if a not in (i - 1, j - 1))
        m = self.cells.sum(axis=axes) if axes else self.cells
        return m if i < j else m.T

    def margin_deviation(self) -> float:
        """Largest ``|marginal cell - 1/2^k|`` over all variables."""
        target = 1.0 / self.size
        return max(float(np.max(np.abs(self.marginal(i) - target))) for i in range(1, self.n + 1))

    def validate(self, tol: float = 1e-9) -> None:
        if np.any(self.cells < 0):
            raise GridError(f"negative cell mass {self.cells.min()!r}")
        total = float(self.cells.sum())
        if abs(total - 1.0) > tol:
            raise GridError(f"grid mass {total!r} differs from 1")
        dev = self.margin_deviation()
        if dev > tol:
            raise MarginError(f"non-uniform margins: max deviation {dev:.3e} > {tol:.1e}")

    def __add__(self, other: "CopulaGrid") -> "CopulaGrid":
        return CopulaGrid(self.n, self.k, self.cells + other.cells)

    def __mul__(self, w: float) -> "CopulaGrid":
        return CopulaGrid(self.n, self.k, float(w) * self.cells)

    __rmul__ = __mul__


def _check_budget(n: int, k: int) -> None:
    if k < 1 or n < 1:
        raise GridError("n and k must be positive")
    if n * k > MAX_GRID_BITS:
        raise GridError(f"n*k = {n * k} exceeds the {MAX_GRID_BITS}-bit cell budget")


def canonical_grid(partition: SetPartition, k: int) -> CopulaGrid:
    """Grid of a canonical copula: every block shares one uniform seed.

    Positive members take the seed's cell, negative members its bitwise
    complement ``2^k - 1 - seed``.
    """
    n = partition.n
    _check_budget(n, k)
    size = 2**k
    cells = np.zeros((size,) * n)
    nb = len(partition.blocks)
    seeds = np.indices((size,) * nb).reshape(nb, -1)
    idx = [None] * n
    for b, block in enumerate(partition.blocks):
        for e in block:
            idx[abs(e) - 1] = seeds[b] if e > 0 else size - 1 - seeds[b]
    cells[tuple(idx)] = float(size) ** -nb
    return CopulaGrid(n, k, cells)


def mixture_grid(spec, k: int) -> CopulaGrid:
    """Convex combination of canonical grids weighted by an :class:`Mb11Spec`."""
    _check_budget(spec.n, k)
    cells = np.zeros((2**k,) * spec.n)
    for part, w in spec.entries.items():
        if w:
            cells += float(w) * canonical_grid(part, k).cells
    return CopulaGrid(spec.n, k, cells)


def discretize_cdf(cdf: Callable, k: int, n: int = 2, margin_tol: float = 1e-9) -> CopulaGrid:
    """Cell masses of a copula cdf by inclusion-exclusion over cell corners.

    ``cdf`` takes ``n`` arrays of coordinates in ``(0, 1]`` (scalar callables
    are vectorized automatically); the cdf is taken as 0 whenever a coordinate
    is 0. Round-off negatives down to ``-1e-12`` are zeroed.
    """
    _check_budget(n, k)
    size = 2**k
    ticks = np.arange(size + 1) / size
    mesh = np.meshgrid(*([ticks[1:]] * n), indexing="ij")
    try:
        inner = np.asarray(cdf(*mesh), dtype=float)
        if inner.shape != mesh[0].shape:
            raise ValueError
    except (TypeError, ValueError):
        inner = np.vectorize(lambda *xs: float(cdf(*xs)))(*mesh)
    F = np.zeros((size + 1,) * n)
    F[(slice(1, None),) * n] = inner
    cells = F
    for axis in range(n):
        cells = np.diff(cells, axis=axis)
    if np.any(cells < -CLAMP_TOL):
        raise GridError(f"cdf yields negative cell mass {cells.min()!r}; not a valid copula cdf")
    cells = np.where(cells < 0, 0.0, cells)
    grid = CopulaGrid(n, k, cells)
    grid.validate(margin_tol)
    return grid


def independence_cdf(*xs):
    out = xs[0]
    for x in xs[1:]:
        out = out * x
    return out


def comonotone_cdf(*xs):
    return np.minimum.reduce(np.broadcast_arrays(*xs))


def countermonotone_cdf(x1, x2):
    return np.maximum(x1 + x2 - 1.0, 0.0)


def cells_of(grid: CopulaGrid):
    """Iterate ``(cell_tuple, mass)`` over nonzero cells."""
    for idx in itertools.product(range(grid.size), repeat=grid.n):
        m = grid.cells[idx]
        if m:
            yield idx, float(m)
