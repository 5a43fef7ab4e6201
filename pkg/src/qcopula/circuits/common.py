from __future__ import annotations

from ..copula.partitions import SetPartition
from ..qsim import Gate, Layout, cnot, h, x


def var_major_layout(n: int, k: int, offset: int = 0, controls=()) -> Layout:
    """Variable ``i`` on qubits ``offset + i*k ... offset + i*k + k - 1`` (MSB first)."""
    return Layout(tuple(tuple(offset + i * k + t for t in range(k)) for i in range(n)), tuple(controls))


def canonical_block_gates(partition: SetPartition, variables) -> list[Gate]:
    """One Hadamard register per block, CNOT fan-out to members, X on '-' members."""
    gates: list[Gate] = []
    for block in partition.blocks:
        root = variables[block[0] - 1]
        gates.extend(h(q) for q in root)
        for member in block[1:]:
            dst = variables[abs(member) - 1]
            for src, tgt in zip(root, dst):
                gates.append(cnot(src, tgt))
                if member < 0:
                    gates.append(x(tgt))
    return gates


def bits_msb(value: int, width: int) -> list[int]:
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]


MAX_QUBITS = 22


class QubitBudgetError(ValueError):
    pass


def check_budget(num_qubits: int) -> None:
    if num_qubits > MAX_QUBITS:
        raise QubitBudgetError(f"{num_qubits} qubits exceed the budget of {MAX_QUBITS}")
