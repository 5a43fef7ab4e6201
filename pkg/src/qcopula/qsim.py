"""Dense statevector simulation.

Qubit ``i`` of a register corresponds to bit ``i`` of the basis-state index
(little-endian). Copula variables are declared in a :class:`Layout` as lists
of qubits read most-significant first, i.e. the binary fraction ``0.q1q2...qk``.

Multi-controlled sub-circuits are simulated natively through
:class:`Gate` objects of kind ``"block"``; nothing is decomposed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MAX_UNITARY_QUBITS = 14

GATE_KINDS = ("x", "h", "z", "ry", "p", "cnot", "swap", "block")

_SQRT1_2 = 1.0 / math.sqrt(2.0)
_H = np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=complex)


class SimulationError(ValueError):
    """Raised for invalid gates, registers or simulation requests."""


@dataclass(frozen=True)
class Gate:
    """A single gate.

    ``kind`` is one of ``x, h, z, ry, p, cnot, swap, block``. For ``cnot`` the
    targets are ``(control, target)``. A ``block`` applies ``body`` only on the
    basis states where every ``(qubit, bit)`` pair in ``controls`` matches.
    """

    kind: str
    targets: tuple[int, ...] = ()
    angle: float | None = None
    controls: tuple[tuple[int, int], ...] = ()
    body: tuple["Gate", ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise SimulationError(f"unknown gate kind {self.kind!r}")
        if self.kind in ("ry", "p"):
            if self.angle is None or not math.isfinite(self.angle):
                raise SimulationError(f"{self.kind} gate needs a finite angle, got {self.angle!r}")
        if self.kind == "block":
            if not self.controls:
                raise SimulationError("controlled block without controls")
            ctrl = [q for q, _ in self.controls]
            if len(set(ctrl)) != len(ctrl):
                raise SimulationError("repeated control qubit")
            if any(b not in (0, 1) for _, b in self.controls):
                raise SimulationError("control bits must be 0 or 1")
            touched = set()
            for g in self.body:
                touched |= g.qubits()
            if touched & set(ctrl):
                raise SimulationError("control and target qubits overlap")
            object.__setattr__(self, "targets", tuple(sorted(touched)))
        else:
            arity = 2 if self.kind in ("cnot", "swap") else 1
            if len(self.targets) != arity:
                raise SimulationError(f"{self.kind} expects {arity} qubit(s), got {self.targets}")
            if len(set(self.targets)) != arity:
                raise SimulationError(f"{self.kind} qubits must be distinct")
        if any(q < 0 for q in self.qubits()):
            raise SimulationError("negative qubit index")

    def qubits(self) -> set[int]:
        return set(self.targets) | {q for q, _ in self.controls}

    def inverse(self) -> "Gate":
        if self.kind in ("ry", "p"):
            return Gate(self.kind, self.targets, -self.angle)
        if self.kind == "block":
            return Gate("block", controls=self.controls, body=tuple(g.inverse() for g in reversed(self.body)))
        return self


def x(q: int) -> Gate:
    return Gate("x", (q,))


def h(q: int) -> Gate:
    return Gate("h", (q,))


def z(q: int) -> Gate:
    return Gate("z", (q,))


def ry(q: int, angle: float) -> Gate:
    return Gate("ry", (q,), float(angle))


def phase(q: int, angle: float) -> Gate:
    return Gate("p", (q,), float(angle))


def cnot(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


def swap(a: int, b: int) -> Gate:
    return Gate("swap", (a, b))


def controlled(controls: Iterable[tuple[int, int]] | dict, body: Iterable[Gate]) -> Gate:
    """Controlled block; ``controls`` maps qubit -> required bit."""
    if isinstance(controls, dict):
        controls = controls.items()
    return Gate("block", controls=tuple((int(q), int(b)) for q, b in controls), body=tuple(body))


@dataclass(frozen=True)
class Layout:
    """Qubit roles: copula variables (MSB first) and control/ancilla qubits."""

    variables: tuple[tuple[int, ...], ...] = ()
    controls: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(tuple(v) for v in self.variables))
        object.__setattr__(self, "controls", tuple(self.controls))
        lengths = {len(v) for v in self.variables}
        if len(lengths) > 1:
            raise SimulationError("variable qubit lists must have equal length")

    @property
    def k(self) -> int:
        return len(self.variables[0]) if self.variables else 0

    @property
    def n(self) -> int:
        return len(self.variables)

    def copula_qubits(self) -> list[int]:
        return [q for v in self.variables for q in v]

    def all_qubits(self) -> list[int]:
        return self.copula_qubits() + list(self.controls)

    def validate(self, num_qubits: int) -> None:
        qs = self.all_qubits()
        if sorted(qs) != list(range(num_qubits)):
            raise SimulationError("every qubit must belong to exactly one layout role")


@dataclass(frozen=True)
class Circuit:
    """Immutable gate list with a declared qubit layout."""

    num_qubits: int
    gates: tuple[Gate, ...] = ()
    layout: Layout = field(default_factory=Layout)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise SimulationError("a circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits(), default=-1) >= self.num_qubits:
                raise SimulationError(f"gate {g.kind} acts outside the {self.num_qubits}-qubit register")
        if self.layout.variables or self.layout.controls:
            self.layout.validate(self.num_qubits)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.num_qubits > self.num_qubits:
            raise SimulationError("cannot append a wider circuit")
        return Circuit(self.num_qubits, self.gates + other.gates, self.layout)

    def inverse(self) -> "Circuit":
        return Circuit(self.num_qubits, tuple(g.inverse() for g in reversed(self.gates)), self.layout)

    def widened(self, extra: int, as_controls: bool = True) -> "Circuit":
        """Same gates on a register with ``extra`` fresh qubits appended."""
        new = tuple(range(self.num_qubits, self.num_qubits + extra))
        layout = self.layout
        if as_controls:
            layout = Layout(layout.variables, layout.controls + new)
        return Circuit(self.num_qubits + extra, self.gates, layout)

    def gate_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}

        def walk(gs):
            for g in gs:
                counts[g.kind] = counts.get(g.kind, 0) + 1
                walk(g.body)

        walk(self.gates)
        return counts


@dataclass
class Statevector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2**self.num_qubits,):
            raise SimulationError("amplitude array length must be 2**num_qubits")

    @classmethod
    def zero(cls, num_qubits: int) -> "Statevector":
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "Statevector":
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class DiscreteDistribution:
    """Outcome probabilities over ``keep``; bit ``j`` of an outcome is qubit ``keep[j]``."""

    keep: tuple[int, ...]
    probs: np.ndarray

    @property
    def outcomes(self) -> dict[int, float]:
        return {i: float(p) for i, p in enumerate(self.probs) if p > 0}

    def __getitem__(self, outcome: int) -> float:
        return float(self.probs[outcome])


# -- kernel -----------------------------------------------------------------
# The state lives as a tensor of shape (2,)*m (+ optional trailing batch axis);
# qubit q sits on axis m-1-q. Controlled blocks act on basic-indexing views, so
# every update below is in place.


def _halves(t, axis):
    i0 = [slice(None)] * t.ndim
    i1 = [slice(None)] * t.ndim
    i0[axis] = 0
    i1[axis] = 1
    return t[tuple(i0) + (Ellipsis,)], t[tuple(i1) + (Ellipsis,)]


def _apply_1q(t, axis, u):
    v0, v1 = _halves(t, axis)
    n0 = u[0, 0] * v0 + u[0, 1] * v1
    n1 = u[1, 0] * v0 + u[1, 1] * v1
    v0[...] = n0
    v1[...] = n1


def _apply_x(t, axis):
    v0, v1 = _halves(t, axis)
    tmp = v0.copy()
    v0[...] = v1
    v1[...] = tmp


def _ry_matrix(angle):
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _apply(t, gate: Gate, axes: dict[int, int]) -> None:
    kind = gate.kind
    if kind == "x":
        _apply_x(t, axes[gate.targets[0]])
    elif kind == "h":
        _apply_1q(t, axes[gate.targets[0]], _H)
    elif kind == "z":
        _halves(t, axes[gate.targets[0]])[1][...] *= -1
    elif kind == "ry":
        _apply_1q(t, axes[gate.targets[0]], _ry_matrix(gate.angle))
    elif kind == "p":
        _halves(t, axes[gate.targets[0]])[1][...] *= complex(math.cos(gate.angle), math.sin(gate.angle))
    elif kind == "cnot":
        c, tq = gate.targets
        ca = axes[c]
        sub = _halves(t, ca)[1]
        ta = axes[tq]
        _apply_x(sub, ta - 1 if ta > ca else ta)
    elif kind == "swap":
        a, b = axes[gate.targets[0]], axes[gate.targets[1]]
        t[...] = np.swapaxes(t, a, b).copy()
    elif kind == "block":
        idx = [slice(None)] * t.ndim
        fixed = []
        for q, bit in gate.controls:
            idx[axes[q]] = bit
            fixed.append(axes[q])
        view = t[tuple(idx) + (Ellipsis,)]
        sub_axes = {q: a - sum(1 for f in fixed if f < a) for q, a in axes.items() if a not in fixed}
        for g in gate.body:
            _apply(view, g, sub_axes)


def _axes(m: int) -> dict[int, int]:
    return {q: m - 1 - q for q in range(m)}


def _check_gate(gate: Gate, m: int) -> None:
    if max(gate.qubits(), default=-1) >= m:
        raise SimulationError(f"gate {gate.kind} acts on qubit outside the {m}-qubit register")


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    """Return a new state with ``gate`` applied."""
    m = state.num_qubits
    _check_gate(gate, m)
    t = state.amplitudes.copy().reshape((2,) * m)
    _apply(t, gate, _axes(m))
    return Statevector(m, t.reshape(-1))


def run(circuit: Circuit, initial: Statevector | None = None) -> Statevector:
    """Simulate ``circuit`` from ``|0...0>`` (or ``initial``)."""
    m = circuit.num_qubits
    if initial is None:
        t = np.zeros((2,) * m, dtype=complex)
        t[(0,) * m] = 1.0
    else:
        if initial.num_qubits != m:
            raise SimulationError("initial state width does not match circuit")
        t = initial.amplitudes.copy().reshape((2,) * m)
    axes = _axes(m)
    for g in circuit.gates:
        _apply(t, g, axes)
    return Statevector(m, t.reshape(-1))


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Full ``2^m x 2^m`` matrix; column ``j`` is the circuit applied to ``|j>``."""
    m = circuit.num_qubits
    if m > MAX_UNITARY_QUBITS:
        raise SimulationError(f"{m} qubits exceeds the unitary materialization cap of {MAX_UNITARY_QUBITS}")
    dim = 2**m
    t = np.eye(dim, dtype=complex).reshape((2,) * m + (dim,))
    axes = _axes(m)
    for g in circuit.gates:
        _apply(t, g, axes)
    return t.reshape(dim, dim)


def _prob_tensor(state: Statevector) -> np.ndarray:
    return (np.abs(state.amplitudes) ** 2).reshape((2,) * state.num_qubits)


def distribution(state: Statevector, keep: Sequence[int]) -> DiscreteDistribution:
    """Marginal distribution over the qubits in ``keep``."""
    keep = tuple(int(q) for q in keep)
    m = state.num_qubits
    if not keep:
        raise SimulationError("keep set is empty")
    if len(set(keep)) != len(keep) or any(not 0 <= q < m for q in keep):
        raise SimulationError(f"invalid keep set {keep}")
    p = _prob_tensor(state)
    order = [m - 1 - q for q in reversed(keep)]
    drop = tuple(a for a in range(m) if a not in order)
    marg = p.sum(axis=drop) if drop else p
    # remaining axes are in increasing original-axis order; permute to `order`
    remaining = sorted(order)
    marg = np.transpose(marg, [remaining.index(a) for a in order])
    return DiscreteDistribution(keep, marg.reshape(-1))


def msb_distribution(state: Statevector, qubits: Sequence[int]) -> np.ndarray:
    """Probabilities indexed by the MSB-first reading of ``qubits``."""
    return distribution(state, list(reversed(list(qubits)))).probs


def grid_distribution(state: Statevector, layout: Layout) -> np.ndarray:
    """Joint cell probabilities of the layout's copula variables, shape ``(2^k,)*n``."""
    if not layout.variables:
        raise SimulationError("layout declares no copula variables")
    flat = msb_distribution(state, layout.copula_qubits())
    return flat.reshape((2**layout.k,) * layout.n)


def sample(state: Statevector, shots: int, seed: int, keep: Sequence[int] | None = None) -> dict[int, int]:
    """Seeded measurement counts.

    Uses ``numpy.random.Generator(PCG64(seed))`` and a single multinomial draw,
    so counts are reproducible for a given numpy release.
    """
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    probs = state.probabilities() if keep is None else distribution(state, keep).probs
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    rng = np.random.Generator(np.random.PCG64(seed))
    counts = rng.multinomial(shots, probs)
    return {int(i): int(c) for i, c in enumerate(counts) if c}
