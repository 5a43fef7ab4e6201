"""Set partitions of ``{1..n}``, optionally signed.

A signed member (negative integer) is countermonotone to its block's lowest
element, which is always positive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

MAX_UNSIGNED_N = 12
MAX_SIGNED_N = 8


class PartitionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SetPartition:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = [tuple(sorted((int(e) for e in b), key=abs)) for b in self.blocks]
        if any(not b for b in blocks):
            raise PartitionError("empty block")
        blocks.sort(key=lambda b: abs(b[0]))
        elems = sorted(abs(e) for b in blocks for e in b)
        if elems != list(range(1, len(elems) + 1)):
            raise PartitionError(f"blocks must cover 1..n exactly once, got {self.blocks}")
        if any(b[0] < 0 for b in blocks):
            raise PartitionError("lowest element of each block must be positive")
        object.__setattr__(self, "blocks", tuple(blocks))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def signed(self) -> bool:
        return any(e < 0 for b in self.blocks for e in b)

    @property
    def code(self) -> str:
        """Restricted-growth label, e.g. ``"112"`` or ``"1-12"`` for ``{{1,-2},{3}}``."""
        out = []
        for i in range(1, self.n + 1):
            for j, b in enumerate(self.blocks, start=1):
                if i in b:
                    out.append(str(j))
                elif -i in b:
                    out.append(f"-{j}")
        return "".join(out)

    def block_of(self, element: int) -> int:
        for j, b in enumerate(self.blocks):
            if element in b or -element in b:
                return j
        raise PartitionError(f"element {element} not in partition")

    def sign_of(self, element: int) -> int:
        return -1 if -element in self.blocks[self.block_of(element)] else 1

    def comonotone(self, i: int, j: int) -> bool:
        """True when ``i`` and ``j`` share a block with equal sign."""
        return self.block_of(i) == self.block_of(j) and self.sign_of(i) == self.sign_of(j)

    @classmethod
    def from_code(cls, code: str) -> "SetPartition":
        code = code.strip().lstrip("Cc")
        labels = [int(t) for t in re.findall(r"-?\d", code)]
        groups: dict[int, list[int]] = {}
        for i, lab in enumerate(labels, start=1):
            groups.setdefault(abs(lab), []).append(-i if lab < 0 else i)
        return cls(tuple(tuple(g) for _, g in sorted(groups.items())))

    @classmethod
    def parse(cls, text: str) -> "SetPartition":
        """Accept ``{{1,-2},{3}}`` or a code such as ``C112`` / ``1-12``."""
        text = text.strip()
        if text.startswith("{"):
            inner = re.findall(r"\{([^{}]*)\}", text)
            return cls(tuple(tuple(int(e) for e in grp.split(",") if e.strip()) for grp in inner))
        return cls.from_code(text)

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(str(e) for e in b) + "}" for b in self.blocks) + "}"


def _rgs(n: int) -> Iterator[list[int]]:
    """Restricted growth strings of length n, lexicographic."""

    def rec(prefix, top):
        if len(prefix) == n:
            yield prefix
            return
        for v in range(top + 2):
            yield from rec(prefix + [v], max(top, v))

    yield from rec([0], 0)


def set_partitions(n: int, signed: bool = False) -> list[SetPartition]:
    """All partitions of ``{1..n}``; with ``signed`` also every sign pattern.

    Unsigned order follows restricted growth strings, so for ``n=3`` the list is
    C111, C112, C121, C122, C123.
    """
    limit = MAX_SIGNED_N if signed else MAX_UNSIGNED_N
    if not 1 <= n <= limit:
        raise PartitionError(f"n={n} outside supported range 1..{limit}")
    out = []
    for rgs in _rgs(n):
        groups: dict[int, list[int]] = {}
        for i, lab in enumerate(rgs, start=1):
            groups.setdefault(lab, []).append(i)
        blocks = [groups[j] for j in sorted(groups)]
        out.append(SetPartition(tuple(tuple(b) for b in blocks)))
        if signed:
            free = [e for b in blocks for e in b[1:]]
            for mask in range(1, 2 ** len(free)):
                neg = {free[i] for i in range(len(free)) if mask >> i & 1}
                out.append(SetPartition(tuple(tuple(-e if e in neg else e for e in b) for b in blocks)))
    return out


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    """Bell number via the Bell triangle."""
    if n < 0:
        raise PartitionError("n must be nonnegative")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def signed_partition_count(n: int) -> int:
    """Number of signed partitions (OEIS A004211): sum_k 2^(n-k) S(n,k)."""
    # Stirling numbers of the second kind by recurrence
    s = [[0] * (n + 1) for _ in range(n + 1)]
    s[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1]
    return sum(2 ** (n - j) * s[n][j] for j in range(n + 1))
