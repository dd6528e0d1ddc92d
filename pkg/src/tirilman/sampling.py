"""Seeded deterministic samplers for vectors, coefficients and block bases.

All randomness flows through numpy's PCG64 seeded with explicit
SeedSequence entropy, so identical (seed, tags) always reproduce the same
draws. Coefficient samplers cover four families (flat, geometric decay,
single spike, random signs/magnitudes) because extremal behavior of these
norms concentrates on flat and spike patterns.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .blocks import BlockBasis
from .params import SpaceParams
from .vectors import DUAL, PRIMAL, FiniteVector
from . import dual as _dual
from . import norm as _norm

FAMILIES = ("flat", "decay", "spike", "random")


def _tag_int(tag) -> int:
    digest = hashlib.sha256(repr(tag).encode()).digest()
    return int.from_bytes(digest[:4], "big")


def rng_from(seed: int, *tags) -> np.random.Generator:
    """Child generator for (seed, tags); stable across runs and platforms."""
    entropy = [int(seed) & 0xFFFFFFFF] + [_tag_int(t) for t in tags]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def sample_coefficients(rng: np.random.Generator, count: int,
                        family: str | None = None) -> list[float]:
    """Nonzero coefficient vector from one of the four families."""
    if family is None:
        family = FAMILIES[int(rng.integers(0, len(FAMILIES)))]
    signs = np.where(rng.random(count) < 0.5, -1.0, 1.0)
    if family == "flat":
        mags = np.full(count, float(rng.uniform(0.25, 2.0)))
    elif family == "decay":
        ratio = float(rng.uniform(0.3, 0.9))
        mags = float(rng.uniform(0.5, 2.0)) * ratio ** np.arange(count)
    elif family == "spike":
        mags = rng.uniform(0.002, 0.08, size=count)
        mags[int(rng.integers(0, count))] = float(rng.uniform(0.8, 2.0))
    elif family == "random":
        mags = rng.uniform(0.01, 2.0, size=count)
    else:
        raise ValueError(f"unknown family {family!r}")
    mags = np.maximum(mags, 1e-9)
    return [float(s * m) for s, m in zip(signs, mags)]


def random_vector(rng: np.random.Generator, max_support: int,
                  side: str = PRIMAL, spread_factor: int = 4) -> FiniteVector:
    """Random finitely supported vector with gaps in its support."""
    size = int(rng.integers(1, max_support + 1))
    window = max(size + 1, spread_factor * size)
    positions = np.sort(rng.choice(np.arange(1, window + 1), size=size, replace=False))
    values = sample_coefficients(rng, size)
    return FiniteVector(tuple(int(p) for p in positions), tuple(values), side)


def random_block_basis(
    params: SpaceParams,
    count: int,
    max_block_support: int,
    side: str = PRIMAL,
    seed: int = 0,
    rng: np.random.Generator | None = None,
    start_position: int = 1,
    max_gap: int = 3,
    dual_tol: float = 1e-9,
    max_retries: int = 8,
) -> BlockBasis:
    """Normalized blocks on consecutive disjoint supports.

    Primal blocks are scaled by their ti_norm, dual blocks by their
    dual_norm. A degenerate draw (all coefficients vanishing) is retried up
    to ``max_retries`` times and then raised.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if max_block_support < 1:
        raise ValueError("max_block_support must be >= 1")
    if rng is None:
        rng = rng_from(seed, "block-basis", side, count, max_block_support)
    blocks = []
    pos = start_position
    for _ in range(count):
        size = int(rng.integers(1, max_block_support + 1))
        for attempt in range(max_retries + 1):
            values = sample_coefficients(rng, size)
            if max(abs(v) for v in values) > 1e-12:
                break
        else:
            raise ValueError("normalization failed: repeated zero draws")
        positions = []
        for _ in range(size):
            positions.append(pos)
            pos += 1 + int(rng.integers(0, max_gap + 1))
        vec = FiniteVector(tuple(positions), tuple(values), side)
        if side == PRIMAL:
            scale = _norm.ti_norm(vec, params).value
        else:
            scale = _dual.dual_norm(vec, params, tol=dual_tol,
                                    support_cap=max(len(vec), 64)).value
        blocks.append(vec.scale(1.0 / scale))
        pos += 1
    return BlockBasis(tuple(blocks), side, normalized=True)
