"""Mixtures of canonical copulas: control-register and pure-state layouts."""

from __future__ import annotations

import math
from fractions import Fraction

from ..copula.mb11 import Mb11Spec
from ..copula.partitions import SetPartition, set_partitions
from ..qsim import Circuit, Gate, cnot, controlled, h, ry
from ..synth import conditional_loader, synth2, synth3_5
from .common import bits_msb, canonical_block_gates, check_budget, var_major_layout


def control_width(spec: Mb11Spec) -> int:
    """Control qubits used by :func:`build_mb11_mixed`.

    Only partitions with nonzero weight get a control state, so a single
    partition needs none and two need one. Five trivariate partitions use the
    three-qubit five-state loader.
    """
    count = len(spec.nonzero())
    return 0 if count <= 1 else math.ceil(math.log2(count))


def build_mb11_mixed(spec: Mb11Spec, k: int) -> Circuit:
    """Mixture of canonical copulas selected by a control register.

    Controls come first (qubits ``0..c-1``), followed by the copula variables
    in variable-major order. Control basis state ``v`` (MSB first) selects the
    ``v``-th nonzero partition in canonical order.
    """
    items = spec.nonzero()
    c = control_width(spec)
    check_budget(spec.n * k + c)
    controls = tuple(range(c))
    layout = var_major_layout(spec.n, k, offset=c, controls=controls)
    weights = [float(w) for _, w in items]

    if c == 0:
        return Circuit(spec.n * k, canonical_block_gates(items[0][0], layout.variables), layout)
    if spec.n == 3 and len(items) == 5:
        gates = synth3_5(weights, controls)
        codes = [0, 1, 2, 3, 4]
    else:
        gates = conditional_loader(weights + [0.0] * (2**c - len(items)), controls)
        codes = list(range(len(items)))
    for code, (part, _) in zip(codes, items):
        body = canonical_block_gates(part, layout.variables)
        gates.append(controlled(list(zip(controls, bits_msb(code, c))), body))
    return Circuit(spec.n * k + c, gates, layout)


# -- pure-state nesting -----------------------------------------------------

def level_factors(partition: SetPartition) -> list[Fraction]:
    """Probability of each one-bit-per-variable state (MSB = variable 1).

    For a canonical copula the bits of every resolution level are
    independent copies of this distribution.
    """
    n, nb = partition.n, len(partition.blocks)
    out = []
    for state in range(2**n):
        bits = bits_msb(state, n)
        ok = all(
            bits[abs(m) - 1] == (bits[block[0] - 1] if m > 0 else 1 - bits[block[0] - 1])
            for block in partition.blocks
            for m in block[1:]
        )
        out.append(Fraction(1, 2**nb) if ok else Fraction(0))
    return out


def _mirror_factors(spec: Mb11Spec):
    parts = set_partitions(spec.n, signed=spec.signed)
    half = 2 ** (spec.n - 1)
    table = []
    for p in parts:
        f = level_factors(p)
        if any(f[s] != f[2**spec.n - 1 - s] for s in range(half)):
            raise ValueError(f"{p} is not mirror symmetric")
        table.append(f[:half])
    return parts, table


def _split(weights, table):
    """Class probabilities and the re-weighted mixtures behind each class."""
    half = len(table[0])
    joint = [[w * f[c] for w, f in zip(weights, table)] for c in range(half)]
    mass = [sum(row) for row in joint]
    children = {}
    for c, row in enumerate(joint):
        if mass[c]:
            children[c] = tuple(x / mass[c] for x in row)
    # each class holds a state and its mirror image
    return [2 * m for m in mass], children


def mirror_contexts(spec: Mb11Spec, layer: int) -> dict[tuple[int, ...], tuple]:
    """Mixture weights in force at ``layer`` (1-based) for each reachable context.

    A context lists the class of every previous layer; class ``c`` is the
    level state whose first-variable bit is 0 and whose remaining bits spell
    ``c`` (its mirror image shares the class). Weights follow the order of
    ``set_partitions(n, signed)``. Unreachable contexts are omitted.
    """
    parts, table = _mirror_factors(spec)
    frontier = {(): tuple(spec.weight(p) for p in parts)}
    for _ in range(layer - 1):
        nxt = {}
        for ctx, w in frontier.items():
            for c, child in _split(w, table)[1].items():
                nxt[ctx + (c,)] = child
        frontier = nxt
    return frontier


def cqg_target(spec: Mb11Spec) -> list:
    """Absolute probabilities of the first-layer states ``|0 c>`` (first variable 0)."""
    parts, table = _mirror_factors(spec)
    w = [spec.weight(p) for p in parts]
    probs, _ = _split(w, table)
    return [p / 2 for p in probs]


def _mirror_pure(spec: Mb11Spec, k: int) -> Circuit:
    n = spec.n
    m = n - 1
    check_budget(n * k)
    parts, table = _mirror_factors(spec)
    layout = var_major_layout(n, k)
    var = layout.variables
    gates: list[Gate] = []
    frontier = {(): tuple(spec.weight(p) for p in parts)}
    for level in range(k):
        gates.append(h(var[0][level]))
        targets = [var[j][level] for j in range(1, n)]
        loads = {}
        nxt = {}
        for ctx, w in frontier.items():
            probs, children = _split(w, table)
            loads[ctx] = [float(p) for p in probs]
            for c, child in children.items():
                nxt[ctx + (c,)] = child
        shared = len({tuple(v) for v in loads.values()}) == 1
        for ctx, probs in loads.items():
            body = synth2(probs, targets) if m == 2 else conditional_loader(probs, targets)
            if shared:
                gates += body
                break
            ctrl = []
            for t, c in enumerate(ctx):
                ctrl += zip((var[j][t] for j in range(1, n)), bits_msb(c, m))
            if body:
                gates.append(controlled(ctrl, body))
        frontier = nxt
    for level in range(k):
        for j in range(1, n):
            gates.append(cnot(var[0][level], var[j][level]))
    return Circuit(n * k, gates, layout)


def build_mb11_pure3(spec: Mb11Spec, k: int) -> Circuit:
    """Trivariate canonical mixture on exactly ``3k`` qubits.

    Each layer puts a Hadamard on variable 1 and loads the class
    probabilities of the current context onto variables 2 and 3. The CNOTs
    that turn classes into mirror pairs are applied once all layers are
    loaded, so deeper layers can condition on the raw class bits.
    """
    if spec.n != 3:
        raise ValueError("build_mb11_pure3 needs a trivariate spec")
    if spec.signed:
        raise ValueError("signed partitions: use build_frechet3_pure")
    return _mirror_pure(spec, k)


def build_frechet3_pure(spec: Mb11Spec, k: int) -> Circuit:
    """Trivariate mixture over signed canonical copulas on ``3k`` qubits."""
    if spec.n != 3:
        raise ValueError("build_frechet3_pure needs a trivariate spec")
    return _mirror_pure(spec, k)


def build_mirror_pure(spec: Mb11Spec, k: int) -> Circuit:
    """Same nesting for any ``n`` (the per-context loader covers ``n-1`` qubits)."""
    return _mirror_pure(spec, k)


# -- four-variable benchmark ------------------------------------------------

BENCHMARK4_CODES = ("1231", "1232", "1233")


def benchmark4_spec() -> Mb11Spec:
    """Variable 4 copies variable 1, 2 or 3, each with weight 1/3."""
    return Mb11Spec.from_codes({c: Fraction(1, 3) for c in BENCHMARK4_CODES})


def benchmark4_control_angles() -> tuple[float, float, float]:
    """Angles giving the two-qubit control state ``(1/3, 1/3, 1/3, 0)``."""
    return 2 * math.acos(math.sqrt(2 / 3)), math.pi / 4, 5 * math.pi / 4


def build_benchmark4(k: int) -> Circuit:
    check_budget(4 * k + 2)
    c1, c2 = 0, 1
    layout = var_major_layout(4, k, offset=2, controls=(c1, c2))
    var = layout.variables
    a1, a2, a3 = benchmark4_control_angles()
    gates: list[Gate] = [ry(c1, a1), ry(c2, a2), cnot(c1, c2), ry(c2, a3)]
    for i in range(3):
        gates += [h(q) for q in var[i]]
    for code, src in enumerate(range(3)):
        body = [cnot(s, t) for s, t in zip(var[src], var[3])]
        gates.append(controlled(list(zip((c1, c2), bits_msb(code, 2))), body))
    return Circuit(4 * k + 2, gates, layout)
