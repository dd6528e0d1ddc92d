"""Literal enumeration oracle for the Tirilman norm on tiny supports.

Unlike the DP engine, the oracle applies no structural reductions: it walks
ALL ordered families of disjoint nonempty consecutive coefficient groups,
including families that do not cover the support, and additionally allows
any number of phantom parts (parts holding no support point, which
contribute nothing to the numerator but raise the family size n) up to
n = 2 * support size. The fixed point is reached by iterating the recursive
norm-level sequence until two consecutive sweeps agree exactly.

Only used to validate ``ti_norm`` and its reductions; capped at support 7.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import OracleCapExceeded
from .params import SpaceParams
from .vectors import FiniteVector

DEFAULT_ORACLE_CAP = 7


@lru_cache(maxsize=32)
def _families(length: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """All nonempty families of disjoint increasing nonempty intervals in [0, length)."""
    out: list[tuple[tuple[int, int], ...]] = []
    acc: list[tuple[int, int]] = []

    def rec(start: int) -> None:
        if acc:
            out.append(tuple(acc))
        for lo in range(start, length):
            for hi in range(lo, length):
                acc.append((lo, hi))
                rec(hi + 1)
                acc.pop()

    rec(0)
    return tuple(out)


def oracle_norm(v: FiniteVector, params: SpaceParams,
                max_support: int = DEFAULT_ORACLE_CAP) -> float:
    """Fixed-point norm by literal enumeration; see module docstring."""
    n = len(v)
    if n > max_support:
        raise OracleCapExceeded(f"oracle_norm caps at support {max_support}, got {n}")
    if n == 0:
        return 0.0
    coeffs = tuple(abs(c) for c in v.values)
    return _fixed_point(coeffs, params.gamma, params.q)


def _fixed_point(coeffs: tuple[float, ...], gamma: float, q: float) -> float:
    N = len(coeffs)
    # best n^(-1/q) over real part count plus any phantom count, n_total <= 2N;
    # evaluated as a literal max so phantom layouts really are enumerated
    bestfac = [0.0] * (N + 1)
    for n_real in range(1, N + 1):
        bestfac[n_real] = max(
            (n_real + z) ** (-1.0 / q) for z in range(0, 2 * N - n_real + 1)
        )
    windows = [(lo, hi) for lo in range(N) for hi in range(lo, N)]
    linf = {}
    for lo, hi in windows:
        linf[(lo, hi)] = max(coeffs[lo : hi + 1])
    val = dict(linf)
    for _ in range(2 * N + 4):
        new = {}
        changed = False
        for lo, hi in windows:
            best = linf[(lo, hi)]
            for fam in _families(hi - lo + 1):
                s = 0.0
                for rlo, rhi in fam:
                    s += val[(lo + rlo, lo + rhi)]
                cand = gamma * (s * bestfac[len(fam)])
                if cand > best:
                    best = cand
            new[(lo, hi)] = best
            if best != val[(lo, hi)]:
                changed = True
        val = new
        if not changed:
            return val[(0, N - 1)]
    raise AssertionError("oracle level sequence failed to stabilize")
