"""Block bases: finite sequences of vectors with increasing disjoint supports."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .vectors import PRIMAL, FiniteVector, combine


@dataclass(frozen=True)
class BlockBasis:
    """Successive blocks: support of block j lies entirely below block j+1.

    ``normalized`` is a claim recorded by the constructor of the basis (the
    samplers rescale each block by its measured norm); tests re-measure.
    """

    blocks: tuple[FiniteVector, ...]
    side: str = PRIMAL
    normalized: bool = False

    def __post_init__(self):
        prev_hi = 0
        for i, blk in enumerate(self.blocks):
            if blk.is_zero():
                raise ValueError(f"block {i} is the zero vector")
            if blk.side != self.side:
                raise ValueError(f"block {i} side {blk.side!r} != basis side {self.side!r}")
            lo, hi = blk.positions[0], blk.positions[-1]
            if lo <= prev_hi:
                raise ValueError("block supports must be disjoint and increasing")
            prev_hi = hi

    def __len__(self) -> int:
        return len(self.blocks)

    def combine(self, coeffs: Sequence[float]) -> FiniteVector:
        """The vector sum coeffs[j] * block[j]."""
        return combine(coeffs, self.blocks)

    def total_support(self) -> int:
        return sum(len(b) for b in self.blocks)


def canonical_basis(count: int, side: str = PRIMAL, start: int = 1) -> BlockBasis:
    """The first ``count`` unit vectors from position ``start``."""
    blocks = tuple(
        FiniteVector((start + j,), (1.0,), side) for j in range(count)
    )
    return BlockBasis(blocks, side, normalized=True)
