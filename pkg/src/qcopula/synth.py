"""Loaders for discrete probability vectors.

All loaders produce real-amplitude fragments built from ``Ry`` rotations and
controlled blocks. Outcome vectors are indexed by the MSB-first reading of the
fragment's qubit list, so ``target[0b01]`` on qubits ``(a, b)`` is the
probability of ``a=0, b=1``.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .qsim import Gate, controlled, ry

NORM_TOL = 1e-12
ZERO_CLAMP = 1e-15


class SynthesisError(ValueError):
    pass


def bernoulli_angle(p: float) -> float:
    """Angle with ``Ry(angle)|0>`` giving ``|1>`` with probability ``p``."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise SynthesisError(f"probability {p} outside [0, 1]")
    return 2.0 * math.asin(math.sqrt(p))


def prob_vector(values, length: int | None = None) -> np.ndarray:
    v = np.asarray([float(x) for x in values], dtype=float)
    if length is not None and v.size != length:
        raise SynthesisError(f"expected {length} probabilities, got {v.size}")
    if v.size == 0 or np.any(v < -ZERO_CLAMP):
        raise SynthesisError("probabilities must be nonnegative")
    total = v.sum()
    if abs(total - 1.0) > NORM_TOL:
        raise SynthesisError(f"probabilities sum to {total!r}, not 1")
    v = np.where(v < ZERO_CLAMP, 0.0, v)
    return v / v.sum()


def _rotation(qubit, angle, prefix_controls):
    gate = ry(qubit, angle)
    if prefix_controls:
        return controlled(prefix_controls, [gate])
    return gate


def conditional_loader(pdf, qubits: Sequence[int] | None = None) -> list[Gate]:
    """Conditional-probability tree loading ``pdf`` (length ``2^m``) onto ``qubits``.

    Qubit ``l`` is rotated conditioned on qubits ``0..l-1``. Branches of zero
    mass get no rotation. When every reachable prefix at a level needs the
    same angle, a single uncontrolled rotation is emitted instead.
    """
    p = prob_vector(pdf)
    m = int(round(math.log2(p.size)))
    if 2**m != p.size:
        raise SynthesisError("length must be a power of two")
    qubits = list(range(m)) if qubits is None else list(qubits)
    if len(qubits) != m:
        raise SynthesisError(f"{m} qubits needed, got {len(qubits)}")

    gates: list[Gate] = []
    for level in range(m):
        # mass of each prefix of length `level`, split by the next bit
        blocks = p.reshape(2**level, 2, -1).sum(axis=2)
        mass = blocks.sum(axis=1)
        angles = {}
        for prefix in range(2**level):
            if mass[prefix] <= 0.0:
                continue
            angles[prefix] = bernoulli_angle(min(1.0, blocks[prefix, 1] / mass[prefix]))
        distinct = set(angles.values())
        if len(distinct) == 1 and level > 0:
            (angle,) = distinct
            if angle != 0.0:
                gates.append(ry(qubits[level], angle))
            continue
        for prefix, angle in angles.items():
            if angle == 0.0:
                continue
            bits = [(prefix >> (level - 1 - i)) & 1 for i in range(level)]
            gates.append(_rotation(qubits[level], angle, list(zip(qubits[:level], bits))))
    return gates


def synth2(target, qubits: Sequence[int] = (0, 1)) -> list[Gate]:
    """Two-qubit loader for four probabilities on ``|00>, |01>, |10>, |11>``.

    Rotation on the first qubit, then one rotation on the second qubit per
    value of the first.
    """
    prob_vector(target, 4)
    return conditional_loader(target, qubits)


def synth3_5(target, qubits: Sequence[int] = (0, 1, 2)) -> list[Gate]:
    """Three-qubit loader for five probabilities.

    ``target[0..3]`` land on ``|000>..|011>`` and ``target[4]`` on ``|100>``;
    the states ``|101>, |110>, |111>`` stay empty.
    """
    t = prob_vector(target, 5)
    top, a, b = qubits
    gates: list[Gate] = []
    angle = bernoulli_angle(t[4])
    if angle:
        gates.append(ry(top, angle))
    rest = t[:4].sum()
    if rest > 0:
        inner = synth2(t[:4] / rest, (a, b))
        if inner:
            gates.append(controlled([(top, 0)], inner))
    return gates
