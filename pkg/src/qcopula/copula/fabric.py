"""Reference formulas for the fabric copula.

These closed forms are kept for comparison only. Statistics of the
simulated fabric grid are authoritative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class FabricParams:
    """``p[j][l]``: probability that variable ``j+2`` agrees with variable 1 at level ``l+1``."""

    p: np.ndarray

    def __post_init__(self):
        p = np.atleast_2d(np.asarray(self.p, dtype=float))
        if p.ndim != 2:
            raise ValueError("p must be a (n-1) x k matrix")
        if np.any((p < 0) | (p > 1)) or not np.all(np.isfinite(p)):
            raise ValueError("fabric probabilities must lie in [0, 1]")
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.p.shape[0] + 1

    @property
    def k(self) -> int:
        return self.p.shape[1]

    def angles(self) -> np.ndarray:
        """Ry angles with ``p = cos^2(angle/2)``."""
        return 2.0 * np.arccos(np.sqrt(self.p))

    @classmethod
    def random(cls, n: int, k: int, rng: np.random.Generator) -> "FabricParams":
        return cls(rng.uniform(0.0, 1.0, size=(n - 1, k)))


@dataclass
class FabricReference:
    rho_levels3: dict[tuple[int, int], float] | None
    rho_series: dict[tuple[int, int], float] = field(default_factory=dict)
    tail_product: dict[tuple[int, int], float] = field(default_factory=dict)


def fabric_reference(params: FabricParams, k_truncation: int | None = None) -> FabricReference:
    """Evaluate the reference fabric formulas.

    ``rho_levels3`` holds the three-variable, three-level correlations (None
    unless ``n == 3`` and ``k >= 3``). Its first two lines index ``p`` by
    (level, group) and the third by (group, level); they are evaluated as written.
    ``rho_series`` and ``tail_product`` pair parameter groups ``(i, j)``
    (1-based) and truncate the infinite series/product at ``k_truncation``
    levels.
    """
    p = params.p
    K = params.k if k_truncation is None else min(k_truncation, params.k)
    rho3 = None
    if params.n == 3 and params.k >= 3:
        rho3 = {
            (1, 2): (4 * (p[0, 0] + p[0, 1]) - p[0, 2]) / 21,
            (1, 3): (4 * (p[1, 0] + p[1, 1]) - p[1, 2]) / 21,
            (2, 3): (16 * p[0, 0] * p[1, 0] + 4 * p[0, 1] * p[1, 1] + p[0, 2] * p[1, 2]) / 21,
        }
    groups = p.shape[0]
    series, tail = {}, {}
    for i in range(groups):
        for j in range(i + 1, groups):
            series[(i + 1, j + 1)] = float(
                sum(3 / 2 ** (2 * l + 2) * p[i, l - 1] * p[j, l - 1] for l in range(1, K + 1))
            )
            tail[(i + 1, j + 1)] = float(math.prod(p[i, l] * p[j, l] for l in range(K)))
    return FabricReference(rho3, series, tail)


def fabric_spearman(params: FabricParams) -> np.ndarray:
    """Exact Spearman matrix of the discretized fabric copula.

    Level-``l`` bits of variables 1 and ``j+2`` have correlation
    ``c = 2p - 1``; two non-leading variables are correlated through
    variable 1 with ``c_i c_j``. Rank correlation weights level ``l`` by
    ``4^-l``.
    """
    c = 2.0 * params.p - 1.0
    w = 4.0 ** -np.arange(1, params.k + 1)
    w = w / w.sum()
    n = params.n
    rho = np.eye(n)
    for j in range(n - 1):
        rho[0, j + 1] = rho[j + 1, 0] = w @ c[j]
        for i in range(j):
            rho[i + 1, j + 1] = rho[j + 1, i + 1] = w @ (c[i] * c[j])
    return rho
