"""Dense tableau simplex for the small LPs behind the dual norm.

Maximizes over a box-bounded polytope that always contains the origin
(every right-hand side is nonnegative), so the all-slack basis is feasible
and no phase-1 is needed. Entering column: largest reduced cost, ties to
the lowest index. Leaving row: minimum ratio with lexicographic tie-break
over the scaled rows, which blocks cycling and keeps the pivot sequence
deterministic under the given input ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapExceeded, LpFailure, LpStall

DEFAULT_MAX_VARIABLES = 64
DEFAULT_MAX_CONSTRAINTS = 20000

_COST_TOL = 1e-11
_PIVOT_TOL = 1e-11


@dataclass(frozen=True)
class LinearProgram:
    """maximize <objective, x>  s.t.  <row_i, x> <= rhs_i,  0 <= x_j <= upper_j.

    Feasibility of the origin (rhs >= 0) and boundedness (finite box) are
    construction invariants.
    """

    objective: tuple[float, ...]
    rows: tuple[tuple[float, ...], ...] = field(default_factory=tuple)
    rhs: tuple[float, ...] = field(default_factory=tuple)
    upper: tuple[float, ...] | None = None

    def __post_init__(self):
        nvar = len(self.objective)
        if nvar == 0:
            raise ValueError("LP needs at least one variable")
        if len(self.rows) != len(self.rhs):
            raise ValueError("row / rhs count mismatch")
        for r, row in enumerate(self.rows):
            if len(row) != nvar:
                raise ValueError(f"row {r} has {len(row)} coefficients, expected {nvar}")
        for r, b in enumerate(self.rhs):
            if not math.isfinite(b) or b < 0.0:
                raise ValueError(f"rhs[{r}] = {b!r}: the origin must stay feasible")
        if self.upper is None:
            object.__setattr__(self, "upper", tuple(1.0 for _ in range(nvar)))
        if len(self.upper) != nvar:
            raise ValueError("upper bound count mismatch")
        for j, u in enumerate(self.upper):
            if not math.isfinite(u) or u <= 0.0:
                raise ValueError(f"upper[{j}] = {u!r}: box bounds must be finite positive")

    @property
    def nvar(self) -> int:
        return len(self.objective)


def solve_small_lp(
    lp: LinearProgram,
    max_variables: int = DEFAULT_MAX_VARIABLES,
    max_constraints: int = DEFAULT_MAX_CONSTRAINTS,
) -> tuple[float, list[float]]:
    """Optimal vertex of the bounded polytope; deterministic pivoting.

    Returns (optimum, point). Raises :class:`LpStall` when pivoting exceeds
    its iteration budget (the caller may perturb and retry).
    """
    n = lp.nvar
    if n > max_variables:
        raise CapExceeded(f"{n} variables exceed the cap {max_variables}")
    if len(lp.rows) > max_constraints:
        raise CapExceeded(f"{len(lp.rows)} constraints exceed the cap {max_constraints}")

    # box bounds become plain rows; the all-slack basis then covers them too
    a_rows = [list(row) for row in lp.rows]
    b_vals = list(lp.rhs)
    for j, u in enumerate(lp.upper):
        bound = [0.0] * n
        bound[j] = 1.0
        a_rows.append(bound)
        b_vals.append(float(u))

    m = len(a_rows)
    T = np.zeros((m, n + m))
    T[:, :n] = np.asarray(a_rows, dtype=np.float64)
    T[:, n:] = np.eye(m)
    b = np.asarray(b_vals, dtype=np.float64)
    red = np.zeros(n + m)
    red[:n] = np.asarray(lp.objective, dtype=np.float64)
    basis = list(range(n, n + m))

    cost_tol = _COST_TOL * max(1.0, float(np.max(np.abs(red[:n]))))
    max_pivots = 1000 + 50 * (m + n)
    for _ in range(max_pivots):
        enter = int(np.argmax(red))
        if red[enter] <= cost_tol:
            break
        col = T[:, enter]
        pos = col > _PIVOT_TOL
        if not pos.any():
            raise LpFailure("unbounded direction despite box bounds")
        ratios = np.full(m, np.inf)
        ratios[pos] = b[pos] / col[pos]
        rmin = ratios.min()
        tied = np.flatnonzero(ratios <= rmin + 1e-12 * (1.0 + abs(rmin)))
        if tied.size == 1:
            leave = int(tied[0])
        else:
            scaled = np.column_stack((b[tied], T[tied])) / col[tied, None]
            order = np.lexsort(scaled.T[::-1])
            leave = int(tied[order[0]])
        piv = T[leave, enter]
        T[leave] /= piv
        b[leave] /= piv
        factors = T[:, enter].copy()
        factors[leave] = 0.0
        T -= factors[:, None] * T[leave][None, :]
        b -= factors * b[leave]
        red = red - red[enter] * T[leave]
        basis[leave] = enter
    else:
        raise LpStall(f"no optimum after {max_pivots} pivots")

    x = [0.0] * n
    for row, var in enumerate(basis):
        if var < n:
            x[var] = float(b[row])
    optimum = float(np.dot(np.asarray(lp.objective), np.asarray(x)))
    return optimum, x


def lp_value(objective: Sequence[float], point: Sequence[float]) -> float:
    """<objective, point> with exact summation (used by reports and tests)."""
    return math.fsum(c * v for c, v in zip(objective, point))
