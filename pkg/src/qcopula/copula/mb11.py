"""MB11 / Fréchet mixtures of canonical copulas and their tail-dependence algebra.

Weights stay exact :class:`fractions.Fraction` values whenever the inputs are
rational (ints, Fractions or ``"p/q"`` strings); floats pass through as floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

import numpy as np

from .partitions import SetPartition, set_partitions

Number = Union[Fraction, float]
WEIGHT_TOL = 1e-12


class InfeasibleError(ValueError):
    """Tail-dependence structure not realizable by the requested construction."""


def to_number(value) -> Number:
    """Parse ``"1/3"``, ints and Fractions exactly; leave floats alone."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a weight")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except ValueError:
            return float(text)
    return float(value)


def _is_zero(w) -> bool:
    return w == 0


@dataclass(frozen=True)
class Mb11Spec:
    """Mixture weights over (possibly signed) set partitions of ``{1..n}``."""

    n: int
    entries: Mapping[SetPartition, Number]

    def __post_init__(self):
        entries = {}
        for part, w in self.entries.items():
            if isinstance(part, str):
                part = SetPartition.parse(part)
            if part.n != self.n:
                raise ValueError(f"partition {part} is not over 1..{self.n}")
            w = to_number(w)
            if w < 0:
                raise ValueError(f"negative weight {w} for {part}")
            entries[part] = entries.get(part, 0) + w
        total = sum(entries.values())
        exact = all(isinstance(w, Fraction) for w in entries.values())
        if (exact and total != 1) or (not exact and abs(float(total) - 1.0) > WEIGHT_TOL):
            raise ValueError(f"weights sum to {total}, not 1")
        object.__setattr__(self, "entries", entries)

    @property
    def signed(self) -> bool:
        return any(p.signed for p in self.entries)

    def weight(self, part) -> Number:
        if isinstance(part, str):
            part = SetPartition.parse(part)
        return self.entries.get(part, Fraction(0))

    def nonzero(self) -> list[tuple[SetPartition, Number]]:
        """Nonzero entries in canonical partition order."""
        order = {p: i for i, p in enumerate(set_partitions(self.n, signed=self.signed))}
        items = [(p, w) for p, w in self.entries.items() if not _is_zero(w)]
        return sorted(items, key=lambda pw: order[pw[0]])

    def vector(self, partitions=None) -> list[Number]:
        partitions = set_partitions(self.n, signed=self.signed) if partitions is None else partitions
        return [self.weight(p) for p in partitions]

    @classmethod
    def from_codes(cls, weights: Mapping[str, object]) -> "Mb11Spec":
        parts = {SetPartition.parse(c): w for c, w in weights.items()}
        n = next(iter(parts)).n
        return cls(n, parts)

    @classmethod
    def b11(cls, alpha) -> "Mb11Spec":
        a = to_number(alpha)
        return cls(2, {SetPartition(((1, 2),)): a, SetPartition(((1,), (2,))): 1 - a})

    @classmethod
    def frechet(cls, alpha, beta) -> "Mb11Spec":
        """Bivariate ``alpha*M2 + beta*W2 + (1-alpha-beta)*Pi2``."""
        a, b = to_number(alpha), to_number(beta)
        return cls(2, {
            SetPartition(((1, 2),)): a,
            SetPartition(((1, -2),)): b,
            SetPartition(((1,), (2,))): 1 - a - b,
        })

    @classmethod
    def linear_spearman(cls, alpha) -> "Mb11Spec":
        a = to_number(alpha)
        return cls.frechet(max(a, 0), max(-a, 0))

    @classmethod
    def independence(cls, n: int) -> "Mb11Spec":
        return cls(n, {SetPartition(tuple((i,) for i in range(1, n + 1))): Fraction(1)})

    @classmethod
    def comonotone(cls, n: int) -> "Mb11Spec":
        return cls(n, {SetPartition((tuple(range(1, n + 1)),)): Fraction(1)})


@dataclass(frozen=True)
class TailDependenceStructure:
    """Symmetric bivariate matrix with unit diagonal, plus optional trivariate coefficient."""

    lambda2: tuple[tuple[Number, ...], ...]
    lambda123: Number | None = None

    def __post_init__(self):
        rows = tuple(tuple(to_number(v) for v in row) for row in self.lambda2)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("tail dependence matrix must be square")
        for i in range(n):
            if rows[i][i] != 1:
                raise ValueError("diagonal must be 1")
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("tail dependence matrix must be symmetric")
                if not 0 <= rows[i][j] <= 1:
                    raise ValueError("entries must lie in [0, 1]")
        object.__setattr__(self, "lambda2", rows)

    @property
    def n(self) -> int:
        return len(self.lambda2)

    def __getitem__(self, ij) -> Number:
        """1-based entry access, ``structure[i, j]``."""
        i, j = ij
        return self.lambda2[i - 1][j - 1]

    def as_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.lambda2])


def _p3(code: str) -> SetPartition:
    return SetPartition.from_code(code)


def mb11_weights_from_taildep(l12, l13, l23, l123) -> Mb11Spec:
    """Trivariate MB11 weights reproducing the given tail coefficients.

    Raises :class:`InfeasibleError` when any weight would be negative.
    """
    l12, l13, l23, l123 = (to_number(v) for v in (l12, l13, l23, l123))
    for v in (l12, l13, l23, l123):
        if not 0 <= v <= 1:
            raise ValueError(f"tail coefficient {v} outside [0, 1]")
    weights = {
        "111": l123,
        "112": l12 - l123,
        "121": l13 - l123,
        "122": l23 - l123,
        "123": 1 - l12 - l13 - l23 + 2 * l123,
    }
    bad = {c: w for c, w in weights.items() if w < 0}
    if bad:
        raise InfeasibleError(f"infeasible tail dependence structure, negative weights {bad}")
    return Mb11Spec(3, {_p3(c): w for c, w in weights.items()})


def taildep_from_weights(spec: Mb11Spec) -> TailDependenceStructure:
    """Upper tail dependence implied by the mixture weights.

    Pair ``(i, j)`` collects the weight of every partition where ``i`` and ``j``
    are comonotone; the trivariate coefficient is the weight of the single
    unsigned block (``n = 3`` only).
    """
    n = spec.n
    mat = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for part, w in spec.entries.items():
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                if part.comonotone(i, j):
                    mat[i - 1][j - 1] += w
                    mat[j - 1][i - 1] += w
    l123 = None
    if n == 3:
        l123 = spec.weight(SetPartition(((1, 2, 3),)))
    return TailDependenceStructure(tuple(tuple(r) for r in mat), l123)


def mb11_from_bivariate_structure(structure, n: int | None = None) -> Mb11Spec:
    """Realize a bivariate tail-dependence matrix with pairwise canonical copulas.

    Pair ``(i, j)`` receives the copula with only ``{i, j}`` comonotone, weighted
    by the matrix entry; the remainder goes to independence. This works exactly
    when the off-diagonal entries are nonnegative and the lower triangle sums
    to at most one (equivalently, all entries sum to at most ``n + 2``).
    """
    if not isinstance(structure, TailDependenceStructure):
        structure = TailDependenceStructure(structure)
    n = structure.n if n is None else n
    if structure.n != n:
        raise ValueError("dimension mismatch")
    lower = [(i, j, structure[i, j]) for i in range(2, n + 1) for j in range(1, i)]
    mass = sum(w for _, _, w in lower)
    if any(w < 0 for _, _, w in lower) or mass > 1 + (0 if isinstance(mass, Fraction) else WEIGHT_TOL):
        raise InfeasibleError(
            f"off-diagonal mass {mass} exceeds 1 (entry sum exceeds n+2); "
            "not realizable by the pairwise MB11 construction"
        )
    entries: dict[SetPartition, Number] = {}
    for i, j, w in lower:
        if w:
            blocks = [(j, i)] + [(e,) for e in range(1, n + 1) if e not in (i, j)]
            entries[SetPartition(tuple(blocks))] = w
    rest = 1 - mass
    if isinstance(rest, float):
        rest = max(rest, 0.0)
    entries[SetPartition(tuple((e,) for e in range(1, n + 1)))] = rest
    return Mb11Spec(n, entries)
