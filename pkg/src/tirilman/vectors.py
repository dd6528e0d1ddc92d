"""Finitely supported vectors and consecutive-interval partitions.

Vectors store only their nonzero entries, keyed by ambient position. Both
norm engines depend only on the ordered list of nonzero coefficients, so
they reindex internally; the ambient positions matter for block layout,
file formats and certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

PRIMAL = "primal"
DUAL = "dual"
_SIDES = (PRIMAL, DUAL)


@dataclass(frozen=True)
class FiniteVector:
    """Immutable finitely supported real sequence.

    ``positions`` are strictly increasing ambient indices (>= 1) and
    ``values`` the matching nonzero coefficients. ``side`` is metadata only;
    the dual engine interprets the same representation against its norm.
    """

    positions: tuple[int, ...]
    values: tuple[float, ...]
    side: str = PRIMAL

    def __post_init__(self):
        if self.side not in _SIDES:
            raise ValueError(f"side must be one of {_SIDES}, got {self.side!r}")
        if len(self.positions) != len(self.values):
            raise ValueError("positions and values differ in length")
        prev = 0
        for pos in self.positions:
            if not isinstance(pos, int) or pos < 1:
                raise ValueError(f"positions must be integers >= 1, got {pos!r}")
            if pos <= prev:
                raise ValueError("positions must be strictly increasing")
            prev = pos
        for val in self.values:
            if not math.isfinite(val):
                raise ValueError(f"coefficients must be finite, got {val!r}")
            if val == 0.0:
                raise ValueError("stored coefficients must be nonzero")

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[int, float]], side: str = PRIMAL) -> "FiniteVector":
        """Build from (position, value) pairs; zero values are dropped."""
        items = sorted((int(p), float(v)) for p, v in pairs)
        items = [(p, v) for p, v in items if v != 0.0]
        return FiniteVector(tuple(p for p, _ in items), tuple(v for _, v in items), side)

    @staticmethod
    def from_values(values: Sequence[float], start: int = 1, side: str = PRIMAL) -> "FiniteVector":
        """Dense coefficients laid out at consecutive positions from ``start``."""
        return FiniteVector.from_pairs(
            ((start + i, float(v)) for i, v in enumerate(values)), side
        )

    @property
    def support_size(self) -> int:
        return len(self.positions)

    def __len__(self) -> int:
        return len(self.positions)

    def is_zero(self) -> bool:
        return not self.positions

    def coeff_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)

    def abs_array(self) -> np.ndarray:
        return np.abs(self.coeff_array())

    def linf(self) -> float:
        return max((abs(v) for v in self.values), default=0.0)

    def l1(self) -> float:
        return math.fsum(abs(v) for v in self.values)

    def value_at(self, pos: int) -> float:
        try:
            return self.values[self.positions.index(pos)]
        except ValueError:
            return 0.0

    def scale(self, factor: float) -> "FiniteVector":
        if factor == 0.0:
            return FiniteVector((), (), self.side)
        return FiniteVector(self.positions, tuple(v * factor for v in self.values), self.side)

    def with_side(self, side: str) -> "FiniteVector":
        return FiniteVector(self.positions, self.values, side)

    def to_pairs(self) -> list[tuple[int, float]]:
        return list(zip(self.positions, self.values))


def restrict(v: FiniteVector, interval: tuple[int, int]) -> FiniteVector:
    """Keep exactly the entries with positions in the closed interval."""
    lo, hi = int(interval[0]), int(interval[1])
    kept = [(p, c) for p, c in zip(v.positions, v.values) if lo <= p <= hi]
    return FiniteVector(tuple(p for p, _ in kept), tuple(c for _, c in kept), v.side)


def spread(v: FiniteVector, targets: Sequence[int]) -> FiniteVector:
    """Move the coefficients, in order, onto new strictly increasing positions."""
    targets = [int(t) for t in targets]
    if len(targets) != len(v.positions):
        raise ValueError(
            f"target list length {len(targets)} != support size {len(v.positions)}"
        )
    for a, b in zip(targets, targets[1:]):
        if b <= a:
            raise ValueError("target positions must be strictly increasing")
    if targets and targets[0] < 1:
        raise ValueError("target positions must be >= 1")
    return FiniteVector(tuple(targets), v.values, v.side)


def combine(coeffs: Sequence[float], vectors: Sequence[FiniteVector]) -> FiniteVector:
    """Sum of coeffs[j] * vectors[j]; supports must be pairwise disjoint."""
    if len(coeffs) != len(vectors):
        raise ValueError("coefficient count != vector count")
    pairs: list[tuple[int, float]] = []
    seen: set[int] = set()
    side = vectors[0].side if vectors else PRIMAL
    for a, vec in zip(coeffs, vectors):
        if a == 0.0:
            continue
        for p, c in zip(vec.positions, vec.values):
            if p in seen:
                raise ValueError(f"supports overlap at position {p}")
            seen.add(p)
            pairs.append((p, a * c))
    return FiniteVector.from_pairs(pairs, side)


@dataclass(frozen=True)
class IntervalPartition:
    """Ordered list of consecutive, disjoint, nonempty position intervals."""

    parts: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.parts:
            raise ValueError("a partition needs at least one part")
        norm_parts = tuple((int(lo), int(hi)) for lo, hi in self.parts)
        object.__setattr__(self, "parts", norm_parts)
        prev_hi = 0
        for lo, hi in norm_parts:
            if lo < 1 or hi < lo:
                raise ValueError(f"invalid interval [{lo}, {hi}]")
            if lo <= prev_hi:
                raise ValueError("parts must be disjoint and increasing")
            prev_hi = hi

    @property
    def n(self) -> int:
        return len(self.parts)
