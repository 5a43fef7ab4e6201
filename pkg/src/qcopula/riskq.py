"""Loss thresholds, tail events and amplitude estimation on copula circuits.

A *prep* circuit is a copula circuit widened by one flag qubit (the last
qubit) plus an oracle that flips the flag on the event of interest.
Amplitude estimation then reads the flag probability off a phase register.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qsim import (
    Circuit,
    Gate,
    Layout,
    controlled,
    h,
    msb_distribution,
    phase,
    ry,
    run,
    swap,
    x,
    z,
)

MAX_AE_QUBITS = 20


@dataclass(frozen=True)
class LossModel:
    """Linear loss ``sum_i coefficients[i] * x_i`` on the dyadic grid ``x_i = cell_i / 2^k``."""

    coefficients: tuple[int, ...] = (16, 4)
    k: int = 2

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if any(c < 0 for c in coeffs) or not coeffs:
            raise ValueError("coefficients must be non-negative")
        if any(c % 2**self.k for c in coeffs):
            raise ValueError("coefficients must be multiples of 2^k so losses are integers")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def loss(self, cells) -> int:
        return sum(c * cell for c, cell in zip(self.coefficients, cells)) // 2**self.k

    def cell_losses(self) -> np.ndarray:
        """Loss of every cell, shape ``(2^k,)*n``."""
        idx = np.indices((2**self.k,) * self.n)
        return sum(c // 2**self.k * idx[i] for i, c in enumerate(self.coefficients))

    @property
    def support(self) -> range:
        return range(0, int(self.cell_losses().max()) + 1)


@dataclass(frozen=True)
class AEConfig:
    """Phase-register size and readout mode.

    ``shots=None`` takes the most likely phase outcome from the exact
    register distribution; otherwise the mode of seeded samples is used.
    """

    m: int = 7
    shots: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")

    @property
    def grid(self) -> np.ndarray:
        y = np.arange(2 ** (self.m - 1) + 1)
        return np.sin(np.pi * y / 2**self.m) ** 2

    def step_around(self, a: float) -> float:
        """Spacing of the two grid values that bracket ``a``."""
        g = self.grid
        i = int(np.clip(np.searchsorted(g, a), 1, g.size - 1))
        return float(g[i] - g[i - 1])


# -- oracles ---------------------------------------------------------------

def cover_gates(sat: np.ndarray, qubits, flag: int) -> list[Gate]:
    """X on ``flag`` for every basis string of ``qubits`` (MSB first) where ``sat`` holds.

    Satisfying strings are covered by maximal sub-cubes, each a single
    multi-controlled X on its fixed prefix.
    """
    sat = np.asarray(sat, dtype=bool).reshape(-1)
    qubits = list(qubits)
    if sat.size != 2 ** len(qubits):
        raise ValueError("truth table length must be 2^len(qubits)")
    gates: list[Gate] = []

    def walk(lo: int, depth: int, bits: list[int]):
        span = sat[lo : lo + 2 ** (len(qubits) - depth)]
        if not span.any():
            return
        if span.all():
            body = [x(flag)]
            gates.append(controlled(list(zip(qubits[:depth], bits)), body) if depth else body[0])
            return
        half = 2 ** (len(qubits) - depth - 1)
        walk(lo, depth + 1, bits + [0])
        walk(lo + half, depth + 1, bits + [1])

    walk(0, 0, [])
    return gates


def _fragment(layout: Layout, sat: np.ndarray) -> Circuit:
    width = len(layout.all_qubits())
    flag = width
    frag_layout = Layout(layout.variables, layout.controls + (flag,))
    return Circuit(width + 1, cover_gates(sat, layout.copula_qubits(), flag), frag_layout)


def build_comparator(model: LossModel, v: int, layout: Layout) -> Circuit:
    """Flag flips exactly on cells with ``loss <= v``; the flag is the last qubit."""
    if layout.n != model.n or layout.k != model.k:
        raise ValueError("layout does not match the loss model")
    if v not in model.support:
        raise ValueError(f"threshold {v} outside the loss support {model.support}")
    return _fragment(layout, model.cell_losses() <= v)


def build_event_oracle(q_index: int, layout: Layout, i: int = 1, j: int = 2) -> Circuit:
    """Flag flips iff variables ``i`` and ``j`` both sit in cells ``>= q_index``."""
    size = 2**layout.k
    if not 0 <= q_index < size:
        raise ValueError(f"q_index must lie in [0, {size})")
    idx = np.indices((size,) * layout.n)
    return _fragment(layout, (idx[i - 1] >= q_index) & (idx[j - 1] >= q_index))


def attach(copula: Circuit, oracle: Circuit) -> Circuit:
    """Copula circuit followed by an oracle fragment on one extra flag qubit."""
    return copula.widened(1) + oracle


def flag_probability(prep: Circuit, flag: int | None = None) -> float:
    flag = prep.num_qubits - 1 if flag is None else flag
    return float(msb_distribution(run(prep), [flag])[1])


# -- amplitude estimation --------------------------------------------------

def grover_gates(prep: Circuit, flag: int) -> list[Gate]:
    """``Q = -A S_0 A^-1 S_flag`` as a gate list (rightmost factor first)."""
    qs = list(range(prep.num_qubits))
    inv = prep.inverse().gates
    flips = [x(q) for q in qs]
    if len(qs) == 1:
        zero_reflect = flips + [z(qs[0])] + flips
    else:
        zero_reflect = flips + [controlled([(q, 1) for q in qs[:-1]], [z(qs[-1])])] + flips
    minus_one = [ry(qs[0], 2 * math.pi)]
    return [z(flag), *inv, *zero_reflect, *minus_one, *prep.gates]


def qft_gates(qubits, inverse: bool = False) -> list[Gate]:
    """Fourier transform of the integer ``sum_j 2^j b_j`` held on ``qubits[j]``."""
    qs = list(qubits)
    m = len(qs)
    gates: list[Gate] = []
    for j in reversed(range(m)):
        gates.append(h(qs[j]))
        for l in reversed(range(j)):
            gates.append(controlled([(qs[l], 1)], [phase(qs[j], math.pi / 2 ** (j - l))]))
    for j in range(m // 2):
        gates.append(swap(qs[j], qs[m - 1 - j]))
    if inverse:
        gates = [g.inverse() for g in reversed(gates)]
    return gates


def estimation_circuit(prep: Circuit, flag: int, m: int) -> tuple[Circuit, list[int]]:
    width = prep.num_qubits + m
    if width > MAX_AE_QUBITS:
        raise ValueError(f"{width} qubits exceed the amplitude-estimation budget of {MAX_AE_QUBITS}")
    evals = list(range(prep.num_qubits, width))
    q = grover_gates(prep, flag)
    gates: list[Gate] = list(prep.gates)
    gates += [h(e) for e in evals]
    for j, e in enumerate(evals):
        gates.append(controlled([(e, 1)], q * 2**j))
    gates += qft_gates(evals, inverse=True)
    return Circuit(width, gates), evals


def phase_distribution(prep: Circuit, flag: int, m: int) -> np.ndarray:
    """Probability of each phase-register integer ``y`` in ``0..2^m - 1``."""
    circ, evals = estimation_circuit(prep, flag, m)
    # msb_distribution reads the first listed qubit as the top bit
    return msb_distribution(run(circ), list(reversed(evals)))


def fold_phases(probs: np.ndarray) -> np.ndarray:
    """Merge ``y`` and ``2^m - y``, which give the same estimate."""
    size = probs.size
    half = size // 2
    out = np.zeros(half + 1)
    for y, p in enumerate(probs):
        out[min(y, size - y)] += p
    return out


def amplitude_estimate(prep: Circuit, flag: int | None = None, config: AEConfig = AEConfig()) -> float:
    """Estimated flag probability ``sin^2(pi y / 2^m)``."""
    flag = prep.num_qubits - 1 if flag is None else flag
    probs = phase_distribution(prep, flag, config.m)
    if config.shots is None:
        folded = fold_phases(probs)
    else:
        seed = 0 if config.seed is None else config.seed
        rng = np.random.Generator(np.random.PCG64(seed))
        counts = rng.multinomial(config.shots, np.clip(probs, 0, None) / probs.sum())
        folded = fold_phases(counts.astype(float))
    y = int(np.argmax(folded))
    return float(np.sin(np.pi * y / 2**config.m) ** 2)


# -- risk quantities -------------------------------------------------------

def classical_cdf(model: LossModel, grid: np.ndarray) -> np.ndarray:
    """``P(loss <= v)`` for every ``v`` in the support, by cell enumeration."""
    losses = model.cell_losses().reshape(-1)
    cells = np.asarray(grid).reshape(-1)
    pmf = np.bincount(losses, weights=cells, minlength=len(model.support))
    return np.cumsum(pmf)


def classical_var(model: LossModel, grid: np.ndarray, level: float) -> int:
    cdf = classical_cdf(model, grid)
    return int(np.argmax(cdf >= level - 1e-15))


def estimate_cdf(model: LossModel, copula: Circuit, v: int, config: AEConfig = AEConfig()) -> float:
    prep = attach(copula, build_comparator(model, v, copula.layout))
    return amplitude_estimate(prep, prep.num_qubits - 1, config)


def estimate_var(model: LossModel, copula: Circuit, level: float, config: AEConfig = AEConfig()) -> int:
    """Smallest support point whose estimated cdf reaches ``level`` (integer bisection)."""
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    lo, hi = model.support[0], model.support[-1]
    while lo < hi:
        mid = (lo + hi) // 2
        if estimate_cdf(model, copula, mid, config) >= level:
            hi = mid
        else:
            lo = mid + 1
    return lo


def classical_cqep(grid: np.ndarray, q_index: int) -> float:
    """Exact ``P(X1 >= q, X2 >= q) / (1 - q)`` from a cell array."""
    g = np.asarray(grid)
    if g.ndim > 2:
        g = g.sum(axis=tuple(range(2, g.ndim)))
    size = g.shape[0]
    return float(g[q_index:, q_index:].sum() / (1 - q_index / size))


def estimate_cqep(copula: Circuit, q_index: int, config: AEConfig = AEConfig()) -> float:
    """Estimate of ``P(X1 >= q, X2 >= q)`` divided by the exact margin ``1 - q``."""
    prep = attach(copula, build_event_oracle(q_index, copula.layout))
    a = amplitude_estimate(prep, prep.num_qubits - 1, config)
    return a / (1 - q_index / 2**copula.layout.k)


__all__ = [
    "AEConfig",
    "LossModel",
    "amplitude_estimate",
    "attach",
    "build_comparator",
    "build_event_oracle",
    "classical_cdf",
    "classical_cqep",
    "classical_var",
    "cover_gates",
    "estimate_cdf",
    "estimate_cqep",
    "estimate_var",
    "estimation_circuit",
    "flag_probability",
    "fold_phases",
    "grover_gates",
    "phase_distribution",
    "qft_gates",
]
