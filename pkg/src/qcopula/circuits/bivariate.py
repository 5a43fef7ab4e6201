"""Fundamental copulas, B11 (pure and mixed) and ``alpha*M_n + (1-alpha)*Pi_n``."""

from __future__ import annotations

import math

from ..copula.mb11 import to_number
from ..copula.partitions import SetPartition
from ..qsim import Circuit, Layout, cnot, controlled, h, ry
from ..synth import bernoulli_angle, conditional_loader
from .common import canonical_block_gates, var_major_layout

FUNDAMENTAL = {
    "M2": SetPartition(((1, 2),)),
    "W2": SetPartition(((1, -2),)),
}


def build_canonical(partition: SetPartition, k: int) -> Circuit:
    """Pure-state circuit for a single canonical copula."""
    layout = var_major_layout(partition.n, k)
    return Circuit(partition.n * k, canonical_block_gates(partition, layout.variables), layout)


def build_fundamental(kind: str, k: int, n: int = 2) -> Circuit:
    kind = kind.upper()
    if kind in ("PI", "PI_N", "PI2"):
        return build_canonical(SetPartition(tuple((i,) for i in range(1, n + 1))), k)
    if kind not in FUNDAMENTAL:
        raise ValueError(f"unknown fundamental copula {kind!r}")
    if n != 2:
        raise ValueError(f"{kind} is bivariate")
    return build_canonical(FUNDAMENTAL[kind], k)


def b11_level_alphas(alpha, k: int) -> list:
    """Mixing coefficient used at each resolution level (level 1 first).

    Inside a diagonal sub-square of side ``2^(k-l+1)`` the B11 copula is again
    B11 with coefficient ``2^(l-1) a / (1 + (2^(l-1) - 1) a)``.
    """
    a = to_number(alpha)
    out = []
    for level in range(1, k + 1):
        s = 2 ** (level - 1)
        out.append(s * a / (1 + (s - 1) * a))
    return out


def b11_angle(alpha) -> float:
    """Ry angle making the second variable's bit differ with probability ``(1-alpha)/2``."""
    return bernoulli_angle((1 - float(alpha)) / 2)


def _b11_pair(a: int, b: int, alpha) -> list:
    gates = [h(a)]
    angle = b11_angle(alpha)
    if angle:
        gates.append(ry(b, angle))
    gates.append(cnot(a, b))
    return gates


def build_b11_pure(alpha, k: int) -> Circuit:
    """B11 copula on exactly ``2k`` qubits.

    Level 1 is a one-qubit B11 block. Each deeper level applies a B11 block
    with the level's coefficient when all previous bit pairs are equal and
    ``H x H`` otherwise. Equality is tested by temporarily XOR-ing the first
    variable into the second.
    """
    a = to_number(alpha)
    if not -1 <= a <= 1:
        raise ValueError("alpha must lie in [-1, 1]")
    if a < 0 and k > 1:
        raise ValueError("negative alpha is only supported at k=1; use build_generic")
    layout = var_major_layout(2, k)
    v1, v2 = layout.variables
    alphas = b11_level_alphas(a, k)
    gates = _b11_pair(v1[0], v2[0], alphas[0])
    for level in range(1, k):
        xor = [cnot(v1[t], v2[t]) for t in range(level)]
        body = [h(v2[level])] + _b11_pair(v1[level], v2[level], alphas[level])[1:]
        gates += xor
        gates += [h(v1[level]), h(v2[level])]
        gates.append(controlled([(v2[t], 0) for t in range(level)], body))
        gates += xor
    return Circuit(2 * k, gates, layout)


def build_b11_mixed(alpha, k: int) -> Circuit:
    """B11 with one control qubit selecting M2 (control=1) or Pi2 (control=0).

    Layout follows the two-level hardware example: first bit pair on qubits
    0 and 1, the control on qubit 2, deeper pairs on ``(3,4), (5,6), ...``.
    """
    a = float(to_number(alpha))
    if not 0 <= a <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    v1 = [0] + [2 * l + 1 for l in range(1, k)]
    v2 = [1] + [2 * l + 2 for l in range(1, k)]
    ctrl = 2
    layout = Layout((tuple(v1), tuple(v2)), (ctrl,))
    gates = []
    angle = bernoulli_angle(a)
    if angle:
        gates.append(ry(ctrl, angle))
    como = [h(q) for q in v1] + [cnot(s, t) for s, t in zip(v1, v2)]
    indep = [h(q) for q in v1 + v2]
    if a > 0:
        gates.append(controlled([(ctrl, 1)], como))
    if a < 1:
        gates.append(controlled([(ctrl, 0)], indep))
    return Circuit(2 * k + 1, gates, layout)


def mn_pin_probabilities(alpha, n: int) -> list[float]:
    a = float(to_number(alpha))
    base = (1 - a) / 2**n
    probs = [base] * 2**n
    probs[0] += a / 2
    probs[-1] += a / 2
    return probs


def mn_pin_reference_angle(alpha) -> float:
    """Closed-form angle ``2 asin(sqrt(1-a) / (sqrt(2) sqrt(1+a)))``.

    For ``n = 3`` this is the rotation of the third qubit given that the first
    two are equal.
    """
    a = float(to_number(alpha))
    return 2 * math.asin(math.sqrt(1 - a) / (math.sqrt(2) * math.sqrt(1 + a)))


def build_mn_pin(alpha, n: int) -> Circuit:
    """``alpha*M_n + (1-alpha)*Pi_n`` at one qubit per variable."""
    a = to_number(alpha)
    if not 0 <= a <= 1 or n < 2:
        raise ValueError("need alpha in [0, 1] and n >= 2")
    layout = var_major_layout(n, 1)
    return Circuit(n, conditional_loader(mn_pin_probabilities(a, n), list(range(n))), layout)
