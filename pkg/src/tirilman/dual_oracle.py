"""Facet-enumeration oracle for the dual norm on tiny supports.

Every functional in the primal unit ball's facet description is a partition
tree: a leaf, or k >= 2 subtrees over order-separated leaf groups. On a
support of size <= 5 there are only a few hundred of them, so the oracle
materializes the complete list (leaf subsets x recursive order-separated
groupings) and solves a single LP against it. The LP backend is scipy's
HiGHS, deliberately different from the hand-rolled simplex the cutting
plane uses, so the two dual routes share no solver code.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np
from scipy.optimize import linprog

from .errors import OracleCapExceeded
from .params import SpaceParams
from .vectors import FiniteVector

DEFAULT_DUAL_ORACLE_CAP = 5


def oracle_dual_norm(b: FiniteVector, params: SpaceParams,
                     max_support: int = DEFAULT_DUAL_ORACLE_CAP) -> float:
    """Dual norm as one LP over the explicit facet list."""
    n = len(b)
    if n > max_support:
        raise OracleCapExceeded(f"oracle_dual_norm caps at support {max_support}, got {n}")
    if n == 0:
        return 0.0
    absb = np.abs(b.coeff_array())
    facets = enumerate_facets(n, params)
    res = linprog(
        c=-absb,
        A_ub=np.vstack(facets),
        b_ub=np.ones(len(facets)),
        bounds=[(0.0, 1.0)] * n,
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"oracle LP failed: {res.message}")
    return float(-res.fun)


def enumerate_facets(n: int, params: SpaceParams) -> list[np.ndarray]:
    """Weight vectors of all partition-tree functionals over n support slots."""
    gamma, q = params.gamma, params.q
    memo: dict[tuple[int, ...], list[np.ndarray]] = {}

    def trees(seg: tuple[int, ...]) -> list[np.ndarray]:
        cached = memo.get(seg)
        if cached is not None:
            return cached
        out: list[np.ndarray] = []
        if len(seg) == 1:
            w = np.zeros(n)
            w[seg[0]] = 1.0
            out.append(w)
        else:
            for parts in _compositions(seg):
                factor = gamma * len(parts) ** (-1.0 / q)
                for choice in product(*(trees(p) for p in parts)):
                    total = choice[0].copy()
                    for extra in choice[1:]:
                        total += extra
                    out.append(factor * total)
        memo[seg] = out
        return out

    facets: list[np.ndarray] = []
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            facets.extend(trees(subset))
    return facets


def _compositions(seg: tuple[int, ...]):
    """Splittings of ``seg`` into k >= 2 nonempty consecutive groups."""
    m = len(seg)
    for mask in range(1, 2 ** (m - 1)):
        parts = []
        start = 0
        for gap in range(m - 1):
            if (mask >> gap) & 1:
                parts.append(seg[start : gap + 1])
                start = gap + 1
        parts.append(seg[start:])
        yield parts
