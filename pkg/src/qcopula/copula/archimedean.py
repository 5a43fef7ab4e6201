"""Gumbel and Clayton copula cdfs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FAMILIES = ("gumbel", "clayton")


@dataclass(frozen=True)
class ArchimedeanParams:
    family: str
    theta: float

    def __post_init__(self):
        family = self.family.lower()
        if family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if family == "gumbel" and not self.theta >= 1:
            raise ValueError("Gumbel requires theta >= 1")
        if family == "clayton" and not self.theta > 0:
            raise ValueError("Clayton requires theta > 0")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "theta", float(self.theta))

    def cdf(self, x1, x2):
        return archimedean_cdf(self, x1, x2)


def archimedean_cdf(params: ArchimedeanParams, x1, x2):
    """Copula cdf at ``(x1, x2)`` in ``(0, 1]^2``; arrays broadcast."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.any((x1 <= 0) | (x1 > 1) | (x2 <= 0) | (x2 > 1)):
        raise ValueError("arguments must lie in (0, 1]")
    th = params.theta
    if params.family == "gumbel":
        s = (-np.log(x1)) ** th + (-np.log(x2)) ** th
        out = np.exp(-(s ** (1.0 / th)))
    else:
        out = (x1**-th + x2**-th - 1.0) ** (-1.0 / th)
    return out if out.ndim else float(out)
