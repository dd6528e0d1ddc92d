"""Inequality suites: block-growth laws, dual estimates, domination, invariance.

Every checker draws its instances from a seeded generator, records one
margin per asserted inequality (nonnegative = held), and returns a
CheckReport whose margins are reproducible bit for bit from (params,
trials, seed). All comparison constants are recomputed from SpaceParams.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .blocks import BlockBasis, canonical_basis
from .errors import RegimeError
from .params import REL_TOL, SpaceParams
from .reports import CheckReport, build_report, worst_of
from .sampling import FAMILIES, random_block_basis, random_vector, rng_from, sample_coefficients
from .vectors import DUAL, PRIMAL, FiniteVector, spread
from . import dual as _dual
from . import norm as _norm
from . import norm_oracle as _norm_oracle
from . import dual_oracle as _dual_oracle

PRIMAL_TOL = 1e-9
DUAL_TOL = 1e-6
ORACLE_NORM_TOL = 1e-9
ORACLE_DUAL_TOL = 1e-7


def _require_strict(params: SpaceParams, suite: str) -> None:
    if not params.strict_regime:
        raise RegimeError(
            f"suite {suite} needs gamma*3^(1/q) < 1, got gamma={params.gamma}, q={params.q}"
        )


def _vec_snap(v: FiniteVector) -> list[list[float]]:
    return [[int(p), float(c)] for p, c in zip(v.positions, v.values)]


def check_prop1(params: SpaceParams, trials: int, seed: int) -> CheckReport:
    """Canonical basis is 1-dominated by normalized blocks (difference form).

    margin = ti(sum a_j x_j) - ti(sum a_j e_j), any (p, gamma).
    """
    rng = rng_from(seed, "prop1", params.p, params.gamma)
    margins, snaps = [], []
    for t in range(trials):
        n = int(rng.integers(1, 7))
        basis = random_block_basis(params, n, 8, PRIMAL, rng=rng)
        coeffs = sample_coefficients(rng, n, FAMILIES[t % len(FAMILIES)])
        lhs = _norm.ti_norm(canonical_basis(n).combine(coeffs), params).value
        rhs = _norm.ti_norm(basis.combine(coeffs), params).value
        margins.append(rhs - lhs)
        snaps.append({"coeffs": coeffs, "blocks": [_vec_snap(b) for b in basis.blocks]})
    return build_report("prop1", params, margins, worst_of(margins, snaps), PRIMAL_TOL)


def check_prop2(params: SpaceParams, n: int, trials: int, seed: int) -> CheckReport:
    """gamma*n^(1/p) <= |sum_1^n x_j| <= 3^(1/q)*n^(1/p) for normalized blocks."""
    _require_strict(params, "prop2")
    rng = rng_from(seed, "prop2", params.p, params.gamma, n)
    lower = params.gamma * params.root_p(n)
    upper = params.three_root_q * params.root_p(n)
    per_block = max(1, 64 // max(n, 1))
    margins, snaps = [], []
    for _ in range(trials):
        basis = random_block_basis(params, n, per_block, PRIMAL, rng=rng)
        value = _norm.ti_norm(basis.combine([1.0] * n), params).value
        snap = {"n": n, "value": value, "blocks": [_vec_snap(b) for b in basis.blocks]}
        margins.append(value - lower)
        snaps.append(dict(snap, bound="lower"))
        margins.append(upper - value)
        snaps.append(dict(snap, bound="upper"))
    consts = {"lower": lower, "upper": upper}
    return build_report("prop2", params, margins, worst_of(margins, snaps),
                        PRIMAL_TOL, consts)


def check_prop3(params: SpaceParams, trials: int, seed: int) -> CheckReport:
    """|sum x_j| <= 3^(1/q) (sum |x_j|^p)^(1/p) for unnormalized blocks."""
    _require_strict(params, "prop3")
    rng = rng_from(seed, "prop3", params.p, params.gamma)
    margins, snaps = [], []
    for _ in range(trials):
        n = int(rng.integers(1, 7))
        basis = random_block_basis(params, n, 8, PRIMAL, rng=rng)
        scales = [float(rng.uniform(0.2, 3.0)) for _ in range(n)]
        blocks = [b.scale(s) for b, s in zip(basis.blocks, scales)]
        norms = [_norm.ti_norm(b, params).value for b in blocks]
        total = _norm.ti_norm(BlockBasis(tuple(blocks), PRIMAL).combine([1.0] * n),
                              params).value
        bound = params.three_root_q * math.fsum(x ** params.p for x in norms) ** (1.0 / params.p)
        margins.append(bound - total)
        snaps.append({"scales": scales, "norms": norms, "total": total,
                      "blocks": [_vec_snap(b) for b in blocks]})
    return build_report("prop3", params, margins, worst_of(margins, snaps), PRIMAL_TOL)


def check_lemma4(params: SpaceParams, trials: int, seed: int) -> CheckReport:
    """dual(sum a_j x_j*) >= 3^(-1/q) (sum |a_j|^q)^(1/q) for normalized dual blocks."""
    _require_strict(params, "lemma4")
    rng = rng_from(seed, "lemma4", params.p, params.gamma)
    margins, snaps = [], []
    for t in range(trials):
        n = int(rng.integers(2, 6))
        basis = random_block_basis(params, n, 2, DUAL, rng=rng)
        coeffs = sample_coefficients(rng, n, FAMILIES[t % len(FAMILIES)])
        vec = basis.combine(coeffs)
        value = _dual.dual_norm(vec, params).value
        bound = (math.fsum(abs(a) ** params.q for a in coeffs) ** (1.0 / params.q)
                 / params.three_root_q)
        margins.append(value - bound)
        snaps.append({"coeffs": coeffs, "value": value, "bound": bound,
                      "blocks": [_vec_snap(b) for b in basis.blocks]})
    return build_report("lemma4", params, margins, worst_of(margins, snaps), DUAL_TOL)


def check_lemma7(params: SpaceParams, n: int, trials: int, seed: int) -> CheckReport:
    """dual(sum_1^n x_j*) <= n^(1/q)/gamma for normalized dual blocks."""
    rng = rng_from(seed, "lemma7", params.p, params.gamma, n)
    bound = params.root_q(n) / params.gamma
    per_block = max(1, 10 // max(n, 1))
    margins, snaps = [], []
    for _ in range(trials):
        basis = random_block_basis(params, n, per_block, DUAL, rng=rng)
        value = _dual.dual_norm(basis.combine([1.0] * n), params).value
        margins.append(bound - value)
        snaps.append({"n": n, "value": value,
                      "blocks": [_vec_snap(b) for b in basis.blocks]})
    consts = {"bound": bound}
    return build_report("lemma7", params, margins, worst_of(margins, snaps),
                        DUAL_TOL, consts)


@dataclass(frozen=True)
class DominationReport:
    """Observed norm ratios norm(sum a_i y_i) / norm(sum a_i x_i).

    ``empirical_K_lower`` (the max ratio) is a valid lower bound for the
    true domination constant of y over x.
    """

    direction: str
    empirical_K_lower: float
    samples: int
    best_coeffs: tuple[float, ...]
    min_ratio: float
    ratios: tuple[float, ...]


def check_domination(params: SpaceParams, x: BlockBasis, y: BlockBasis,
                     trials: int, seed: int) -> DominationReport:
    """Sample coefficient vectors and report the extreme norm ratios."""
    if len(x) != len(y):
        raise ValueError("bases must have equal length")
    if x.side != y.side:
        raise ValueError("bases must live on the same side")
    rng = rng_from(seed, "domination", x.side, len(x))
    n = len(x)
    ratios, coeff_log = [], []
    for t in range(trials):
        coeffs = sample_coefficients(rng, n, FAMILIES[t % len(FAMILIES)])
        num = _measure(y.combine(coeffs), params)
        den = _measure(x.combine(coeffs), params)
        if den <= 1e-12:
            continue
        ratios.append(num / den)
        coeff_log.append(tuple(coeffs))
    if not ratios:
        raise ValueError("all denominators vanished")
    best = max(range(len(ratios)), key=lambda i: ratios[i])
    return DominationReport(
        direction=f"{y.side} blocks vs reference",
        empirical_K_lower=ratios[best],
        samples=len(ratios),
        best_coeffs=coeff_log[best],
        min_ratio=min(ratios),
        ratios=tuple(ratios),
    )


def _measure(v: FiniteVector, params: SpaceParams) -> float:
    if v.is_zero():
        return 0.0
    if v.side == DUAL:
        return _dual.dual_norm(v, params).value
    return _norm.ti_norm(v, params).value


def domination_suite(params: SpaceParams, side: str, instances: int, seed: int,
                     coeff_draws: int = 3) -> CheckReport:
    """K = 1 domination suite.

    Primal direction: ratios ti(sum a y)/ti(sum a e) >= 1 (margin ratio-1).
    Dual direction: ratios dual(sum a y*)/dual(sum a e*) <= 1 (margin 1-ratio).
    """
    rng = rng_from(seed, "domination-suite", side, params.p, params.gamma)
    margins, snaps = [], []
    tol = PRIMAL_TOL if side == PRIMAL else DUAL_TOL
    suite = "prop1-domination" if side == PRIMAL else "lemma6"
    count = 0
    while count < instances:
        n = int(rng.integers(2, 6))
        y = random_block_basis(params, n, 3 if side == PRIMAL else 2, side, rng=rng)
        x = canonical_basis(n, side)
        for t in range(coeff_draws):
            if count >= instances:
                break
            coeffs = sample_coefficients(rng, n, FAMILIES[(count + t) % len(FAMILIES)])
            num = _measure(y.combine(coeffs), params)
            den = _measure(x.combine(coeffs), params)
            if den <= 1e-12:
                continue
            ratio = num / den
            margins.append(ratio - 1.0 if side == PRIMAL else 1.0 - ratio)
            snaps.append({"coeffs": coeffs, "ratio": ratio,
                          "blocks": [_vec_snap(b) for b in y.blocks]})
            count += 1
    return build_report(suite, params, margins, worst_of(margins, snaps), tol)


def check_invariance(params: SpaceParams, trials: int, seed: int,
                     zeroing_instances: int = 100) -> CheckReport:
    """Sign-flip and spreading invariance plus monotone coordinate zeroing.

    Margins are negated relative deviations; tolerance is the package-wide
    1e-12 comparison precision.
    """
    rng = rng_from(seed, "invariance", params.p, params.gamma)
    margins, snaps = [], []
    for t in range(trials):
        v = random_vector(rng, 10)
        base = _norm.ti_norm(v, params).value
        flips = tuple(-c if rng.random() < 0.5 else c for c in v.values)
        flipped = FiniteVector(v.positions, flips, v.side)
        dev = abs(_norm.ti_norm(flipped, params).value - base) / base
        margins.append(-dev)
        snaps.append({"kind": "sign", "vector": _vec_snap(v)})
        shifts = np.cumsum(rng.integers(1, 5, size=len(v)))
        targets = [int(p) for p in shifts]
        moved = spread(v, targets)
        dev = abs(_norm.ti_norm(moved, params).value - base) / base
        margins.append(-dev)
        snaps.append({"kind": "spread", "vector": _vec_snap(v), "targets": targets})
        if t < zeroing_instances and len(v) > 1:
            for drop in range(len(v)):
                kept = [(p, c) for i, (p, c) in enumerate(v.to_pairs()) if i != drop]
                sub = FiniteVector.from_pairs(kept, v.side)
                violation = max(0.0, _norm.ti_norm(sub, params).value - base) / base
                margins.append(-violation)
                snaps.append({"kind": "zeroing", "vector": _vec_snap(v), "drop": drop})
    return build_report("invariance", params, margins, worst_of(margins, snaps), REL_TOL)


def check_oracle_norm(params: SpaceParams, trials: int, seed: int,
                      max_support: int = 7) -> CheckReport:
    """|ti_norm - oracle_norm| <= 1e-9 * max(1, value) on tiny vectors."""
    rng = rng_from(seed, "oracle-norm", params.p, params.gamma)
    margins, snaps = [], []
    for _ in range(trials):
        v = random_vector(rng, max_support)
        got = _norm.ti_norm(v, params).value
        want = _norm_oracle.oracle_norm(v, params, max_support)
        rel = abs(got - want) / max(1.0, want)
        margins.append(-rel)
        snaps.append({"vector": _vec_snap(v), "ti": got, "oracle": want})
    return build_report("oracle-norm", params, margins, worst_of(margins, snaps),
                        ORACLE_NORM_TOL)


def check_oracle_dual(params: SpaceParams, trials: int, seed: int,
                      max_support: int = 5) -> CheckReport:
    """|dual_norm - oracle_dual_norm| <= 1e-7 * max(1, value) on tiny duals.

    dual_norm runs at tol 1e-9 here so the convergence threshold stays an
    order below the comparison budget.
    """
    rng = rng_from(seed, "oracle-dual", params.p, params.gamma)
    margins, snaps = [], []
    for _ in range(trials):
        v = random_vector(rng, max_support, side=DUAL)
        got = _dual.dual_norm(v, params, tol=1e-9).value
        want = _dual_oracle.oracle_dual_norm(v, params, max_support)
        rel = abs(got - want) / max(1.0, want)
        margins.append(-rel)
        snaps.append({"vector": _vec_snap(v), "dual": got, "oracle": want})
    return build_report("oracle-dual", params, margins, worst_of(margins, snaps),
                        ORACLE_DUAL_TOL)


def symmetry_witness_search(params: SpaceParams, N: int, budget: int, seed: int
                            ) -> tuple[FiniteVector, tuple[int, ...], float]:
    """Exploratory search for coefficient permutations that move the norm.

    Maximizes ti(permuted)/ti(original) over grid and random vectors and
    over (all or sampled) permutations. Reports the best triple found; a
    best ratio of 1 means nothing was found at this size, and no claim is
    made either way.
    """
    if N > 12:
        raise ValueError(f"witness search caps at N = 12, got {N}")
    rng = rng_from(seed, "witness", params.p, params.gamma, N)
    candidates: list[list[float]] = [
        [1.0] * N,
        [1.0 if i < N // 2 else 0.2 for i in range(N)],
        [0.7 ** i for i in range(N)],
        [1.0 if i % 2 == 0 else 0.15 for i in range(N)],
    ]
    best_ratio = 1.0
    best_vec = FiniteVector.from_values(candidates[0])
    best_perm = tuple(range(N))
    spent = 0
    while spent < budget:
        if candidates:
            values = candidates.pop(0)
        else:
            values = sample_coefficients(rng, N)
        v = FiniteVector.from_values([abs(x) for x in values])
        base = _norm.ti_norm(v, params).value
        if base <= 0.0:
            continue
        per_vector = min(budget - spent, 60)
        if math.factorial(N) <= per_vector:
            perms = itertools.permutations(range(N))
        else:
            perms = (tuple(int(i) for i in rng.permutation(N)) for _ in range(per_vector))
        for perm in perms:
            spent += 1
            permuted = FiniteVector.from_values([abs(values[j]) for j in perm])
            ratio = _norm.ti_norm(permuted, params).value / base
            if ratio > best_ratio:
                best_ratio, best_vec, best_perm = ratio, v, tuple(perm)
            if spent >= budget:
                break
    return best_vec, best_perm, best_ratio
