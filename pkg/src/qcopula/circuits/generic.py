"""Exact circuits for arbitrary discretized copulas and the fabric copula."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..copula.fabric import FabricParams
from ..copula.grids import CopulaGrid
from ..qsim import Circuit, Gate, cnot, controlled, h, ry
from ..synth import conditional_loader, synth2
from .common import bits_msb, check_budget, var_major_layout


def synthesizer_count(n: int, k: int) -> int:
    """Loaders needed when every context is reachable: ``(2^(kn) - 1) / (2^n - 1)``."""
    return (2 ** (k * n) - 1) // (2**n - 1)


@dataclass(frozen=True)
class LevelLoad:
    level: int  # 0-based resolution level
    context: int  # bits of all variables at shallower levels, level-major, MSB first
    probs: np.ndarray  # conditional distribution of the level's n bits


def level_loads(grid: CopulaGrid) -> list[LevelLoad]:
    """Conditional distribution of each level's bits given all shallower bits.

    Contexts of zero probability are skipped.
    """
    n, k = grid.n, grid.k
    # axes (var, bit) -> reorder to (bit, var) so that levels are contiguous
    t = grid.cells.reshape((2,) * (n * k))
    order = [v * k + b for b in range(k) for v in range(n)]
    t = np.transpose(t, order)
    flat = t.reshape(-1)
    loads = []
    for level in range(k):
        rows = flat.reshape(2 ** (n * level), 2**n, -1).sum(axis=2)
        for ctx, row in enumerate(rows):
            mass = row.sum()
            if mass > 0:
                loads.append(LevelLoad(level, ctx, row / mass))
    return loads


def build_generic(grid: CopulaGrid) -> Circuit:
    """Load any valid copula grid on ``n*k`` qubits without ancillas.

    Level ``l`` gets one loader per reachable combination of the shallower
    bits, acting on the level-``l`` qubit of every variable.
    """
    grid.validate()
    n, k = grid.n, grid.k
    check_budget(n * k)
    layout = var_major_layout(n, k)
    var = layout.variables
    gates: list[Gate] = []
    for load in level_loads(grid):
        targets = [var[v][load.level] for v in range(n)]
        body = synth2(load.probs, targets) if n == 2 else conditional_loader(load.probs, targets)
        if load.level == 0:
            gates += body
            continue
        prefix = [var[v][t] for t in range(load.level) for v in range(n)]
        if body:
            gates.append(controlled(list(zip(prefix, bits_msb(load.context, len(prefix)))), body))
    return Circuit(n * k, gates, layout)


def build_fabric(params: FabricParams) -> Circuit:
    """Fabric copula: at every level, variable ``j+2`` agrees with variable 1
    with probability ``p[j][l]``.

    Each level-``l`` qubit of variable 1 gets a Hadamard; the partner qubit
    is rotated by ``2 acos(sqrt(p))`` and then XOR-ed with it. Every qubit is
    marginally fair, so margins are uniform for any parameters.
    """
    n, k = params.n, params.k
    check_budget(n * k)
    layout = var_major_layout(n, k)
    var = layout.variables
    angles = params.angles()
    gates: list[Gate] = []
    for level in range(k):
        lead = var[0][level]
        gates.append(h(lead))
        for j in range(n - 1):
            tgt = var[j + 1][level]
            if angles[j, level]:
                gates.append(ry(tgt, float(angles[j, level])))
            gates.append(cnot(lead, tgt))
    return Circuit(n * k, gates, layout)
