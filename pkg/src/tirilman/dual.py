"""Dual Tirilman norm by cutting planes with the primal norm as separation oracle.

The dual norm of b is the maximum of <b, a> over the primal unit ball. On a
fixed finite support that ball is a polytope whose facets are the partition
tree functionals, so the norm is a finite LP. Rather than enumerating the
facets, each round solves the LP over the facets seen so far, measures the
primal norm of the optimal vertex, and either certifies (1+tol)-feasibility
or adds the vertex's norming tree as a violated cut. Every LP optimum upper
bounds the true dual norm and the sequence is nonincreasing.

Both norms are unconditional, so the computation runs in the nonnegative
orthant (signs are restored on the witness) and the box 0 <= a_i <= 1 is
valid from the start. The all-singleton family functional is added up front
as a warm start; callers that know more structure may pass further valid
``extra_facets``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, LpFailure
from .lp import LinearProgram, solve_small_lp
from .params import SpaceParams
from .trees import Certificate, FlatMax, Leaf, Node, functional_coefficients
from .vectors import DUAL, PRIMAL, FiniteVector
from . import norm as _norm

DEFAULT_DUAL_CAP = 64
DEFAULT_TOL = 1e-7
DEFAULT_MAX_CUTS = 10000


@dataclass(frozen=True)
class DualNormResult:
    """Dual norm value with the primal witness that attains it.

    The witness has primal norm <= 1 + tol and pairs with b to ``value``;
    every facet accumulated during the run holds at the witness (weak
    duality of the final LP vertex).
    """

    value: float
    witness: FiniteVector
    facets_used: int
    converged: bool

    @property
    def iterations(self) -> int:
        return self.facets_used


def singleton_family_tree(positions: tuple[int, ...], params: SpaceParams) -> Node:
    """The k = len(positions) all-singleton family functional."""
    leaves = tuple(Leaf(p) for p in positions)
    return Node(leaves, params.gamma * len(leaves) ** (-1.0 / params.q))


def dual_norm(
    b: FiniteVector,
    params: SpaceParams,
    tol: float = DEFAULT_TOL,
    support_cap: int = DEFAULT_DUAL_CAP,
    max_cuts: int = DEFAULT_MAX_CUTS,
    extra_facets: tuple[Certificate, ...] = (),
    facet_log: list[str] | None = None,
) -> DualNormResult:
    """Cutting-plane dual norm; see the module docstring for the scheme.

    ``facet_log``, when given, collects the serialized text of every facet
    functional used (warm starts and cuts alike).
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    n = len(b)
    if n > support_cap:
        raise CapExceeded(f"dual support {n} exceeds cap {support_cap}")
    if n == 0:
        return DualNormResult(0.0, FiniteVector((), (), PRIMAL), 0, True)

    positions = b.positions
    signs = tuple(1.0 if v >= 0.0 else -1.0 for v in b.values)
    absb = np.abs(b.coeff_array())
    pos_index = {p: i for i, p in enumerate(positions)}

    rows: list[tuple[float, ...]] = []
    seen: set[str] = set()

    def add_facet(cert: Certificate) -> bool:
        key = cert.serialize()
        if key in seen:
            return False
        coeffs = functional_coefficients(cert)
        row = [0.0] * n
        for pos, w in coeffs.items():
            idx = pos_index.get(pos)
            if idx is None:
                raise ValueError(f"facet touches position {pos} outside the support")
            row[idx] = w
        seen.add(key)
        rows.append(tuple(row))
        if facet_log is not None:
            facet_log.append(key)
        return True

    if n >= 2:
        add_facet(singleton_family_tree(positions, params))
    for cert in extra_facets:
        add_facet(cert)

    def measure(point: list[float]):
        vec = FiniteVector.from_pairs(
            ((positions[i], point[i]) for i in range(n) if point[i] != 0.0), PRIMAL
        )
        if vec.is_zero():
            return 0.0, None
        res = _norm.ti_norm(vec, params, support_cap=max(n, 1))
        return res.value, res

    # weights for the face-centering tie-break below
    bmax = float(absb.max())
    weights = tuple(float(x) / bmax for x in absb)

    objective = tuple(float(x) for x in absb)
    point = [0.0] * n
    converged = False
    for _ in range(max_cuts):
        lp = LinearProgram(
            objective=objective,
            rows=tuple(rows),
            rhs=tuple(1.0 for _ in rows),
            upper=tuple(1.0 for _ in range(n)),
        )
        upper_bound, point = solve_small_lp(lp, max_variables=max(n, 64))
        norm_val, res = measure(point)
        if norm_val <= 1.0 + tol:
            converged = True
            break
        new_cut = _cut_from(res, add_facet)

        # Kelley stalls on degenerate optimal faces (symmetric objectives
        # admit combinatorially many infeasible vertices at one value), so
        # also probe the weighted max-min center of the current optimal
        # face: maximize <b,a> + mu*t subject to t*w_i <= a_i. The center
        # either certifies (its value sits within mu of the pure optimum)
        # or contributes a second, usually different, cut.
        mu = tol * max(1.0, upper_bound) / 8.0
        lp2 = LinearProgram(
            objective=objective + (mu,),
            rows=tuple(row + (0.0,) for row in rows)
            + tuple(_tie_row(i, weights[i], n) for i in range(n)),
            rhs=tuple(1.0 for _ in rows) + tuple(0.0 for _ in range(n)),
            upper=tuple(1.0 for _ in range(n)) + (1.0,),
        )
        _, point2 = solve_small_lp(lp2, max_variables=max(n + 1, 64))
        point2 = point2[:n]
        norm2, res2 = measure(point2)
        if norm2 <= 1.0 + tol:
            converged = True
            point = point2
            break
        new_cut = _cut_from(res2, add_facet) or new_cut
        if not new_cut:
            raise LpFailure(
                "separation repeated every facet: degenerate constraint accumulation"
            )

    witness = FiniteVector.from_pairs(
        ((positions[i], signs[i] * point[i]) for i in range(n) if point[i] != 0.0),
        PRIMAL,
    )
    value = math.fsum(absb[i] * point[i] for i in range(n))
    return DualNormResult(value, witness, len(rows), converged)


def _tie_row(i: int, weight: float, n: int) -> tuple[float, ...]:
    row = [0.0] * (n + 1)
    row[i] = -1.0
    row[n] = weight
    return tuple(row)


def _cut_from(res, add_facet) -> bool:
    cert = res.certificate
    if isinstance(cert, FlatMax):
        raise LpFailure(
            "sup-norm certificate above the box bound; LP vertex is inconsistent"
        )
    return add_facet(cert)


def separation(a: FiniteVector, params: SpaceParams,
               support_cap: int = _norm.DEFAULT_SUPPORT_CAP) -> tuple[float, Certificate]:
    """Primal norm and certificate; the certificate cuts a off whenever norm > 1."""
    return _norm.separation(a, params, support_cap)
