"""Numerical tolerances and capacity limits shared by every module."""
from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    norm: float = 1e-10
    herm: float = 1e-10
    psd: float = 1e-9
    unit: float = 1e-9
    num: float = 1e-9
    tail: float = 1e-10
    conv: float = 1e-8
    degen: float = 1e-12

    def with_num(self, value: float) -> "Tolerances":
        return replace(self, num=float(value))


DEFAULT_TOL = Tolerances()

# total Hilbert-space dimension above which dense construction is refused
MAX_DIM = 16384
