"""Command line front end.

Commands: norm, dual, certify, check <suite>, sweep, search-witness,
oracle-compare. Exit codes: 0 pass, 1 suite failure, 2 usage/parse errors,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .cache import ResultCache, cache_key, params_hash, vector_hash
from .checks import (
    check_invariance,
    check_lemma4,
    check_lemma7,
    check_oracle_dual,
    check_oracle_norm,
    check_prop1,
    check_prop2,
    check_prop3,
    domination_suite,
    symmetry_witness_search,
)
from .config import ALL_SUITES, FORMATS, RunConfig, load_config
from .errors import CapExceeded, LpFailure, ParseError, RegimeError, TirilmanError
from .io import (
    canonical_json,
    format_margins_csv,
    format_vector_csv,
    read_vector_csv,
    report_to_dict,
    write_vector_csv,
)
from .params import make_space_params
from .prop9 import asymptotic_lq_profile, prop9_parameters
from .reports import CheckReport
from .vectors import DUAL, PRIMAL
from . import dual as _dual
from . import norm as _norm

_SUITE_DEFAULT_TRIALS = {"prop9": 100, "invariance": 500, "oracle-norm": 500}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=float, default=None, help="exponent p in (1, inf)")
    parser.add_argument("--gamma", type=float, default=None, help="weight in (0, 1)")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--config", default=None, help="flat key=value config file")
    parser.add_argument("--out", default=None, help="output directory (or $TIRILMAN_OUT)")
    parser.add_argument("--format", default=None, dest="formats",
                        help="comma subset of json,csv")
    parser.add_argument("--no-cache", action="store_true")
    parser.add_argument("--support-cap", type=int, default=None, dest="support_cap")
    parser.add_argument("--dual-cap", type=int, default=None, dest="dual_cap")
    parser.add_argument("--max-cuts", type=int, default=None, dest="cut_cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tirilman",
        description="Tirilman norm Ti(p,gamma), its dual, and inequality suites",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("norm", help="norm of a vector CSV")
    p_norm.add_argument("vector")
    p_norm.add_argument("--certify", default=None, help="write the norming certificate here")
    _add_common(p_norm)
    p_norm.set_defaults(func=cmd_norm)

    p_dual = sub.add_parser("dual", help="dual norm of a vector CSV")
    p_dual.add_argument("vector")
    p_dual.add_argument("--witness", default=None, help="write the primal witness CSV here")
    p_dual.add_argument("--facets", default=None, help="write accumulated facet trees here")
    _add_common(p_dual)
    p_dual.set_defaults(func=cmd_dual)

    p_cert = sub.add_parser("certify", help="print/write a norming certificate")
    p_cert.add_argument("vector")
    p_cert.add_argument("--cert-out", default=None)
    _add_common(p_cert)
    p_cert.set_defaults(func=cmd_certify)

    p_check = sub.add_parser("check", help="run one inequality suite")
    p_check.add_argument("suite", choices=ALL_SUITES)
    p_check.add_argument("--n", type=int, default=None, help="block count for prop2/lemma7")
    p_check.add_argument("--m", type=int, default=4, help="max block count for prop9")
    p_check.add_argument("--eta", type=float, default=0.05, help="sup-norm ceiling for prop9")
    p_check.add_argument("--support-budget", type=int, default=400, dest="support_budget")
    _add_common(p_check)
    p_check.set_defaults(func=cmd_check)

    p_sweep = sub.add_parser("sweep", help="run a suite over a (p, gamma) grid")
    p_sweep.add_argument("--suite", choices=ALL_SUITES, required=True)
    p_sweep.add_argument("--p-grid", default="", dest="p_grid")
    p_sweep.add_argument("--gamma-grid", default="", dest="gamma_grid")
    p_sweep.add_argument("--n", type=int, default=None)
    _add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_wit = sub.add_parser("search-witness", help="explore permutation norm ratios")
    p_wit.add_argument("--size", type=int, default=8)
    p_wit.add_argument("--budget", type=int, default=500)
    _add_common(p_wit)
    p_wit.set_defaults(func=cmd_search_witness)

    p_oc = sub.add_parser("oracle-compare", help="engine vs literal oracle")
    p_oc.add_argument("--which", choices=("norm", "dual"), required=True)
    _add_common(p_oc)
    p_oc.set_defaults(func=cmd_oracle_compare)

    return parser


def _config_from(args) -> RunConfig:
    overrides = {
        "p": args.p,
        "gamma": args.gamma,
        "seed": args.seed,
        "trials": args.trials,
        "tol": args.tol,
        "out": args.out,
        "support_cap": args.support_cap,
        "dual_cap": args.dual_cap,
        "cut_cap": args.cut_cap,
    }
    if args.formats is not None:
        overrides["formats"] = tuple(f.strip() for f in args.formats.split(",") if f.strip())
    return load_config(args.config, overrides)


def cmd_norm(args) -> int:
    cfg = _config_from(args)
    params = make_space_params(cfg.p, cfg.gamma)
    vec = read_vector_csv(args.vector)
    cache = None if args.no_cache else ResultCache(cfg.out)
    key = cache_key("ti_norm", vector_hash(vec),
                    params_hash(params, support_cap=cfg.support_cap))
    cert_text = None
    if cache is not None and (hit := cache.get(key)) is not None:
        value = float(hit["value"])
        cert_text = hit.get("certificate")
    else:
        res = _norm.ti_norm(vec, params, support_cap=cfg.support_cap)
        value = res.value
        if args.certify:
            cert_text = res.certificate.serialize() + "\n"
        if cache is not None:
            cache.put(key, {"op": "ti_norm", "value": value, "certificate": cert_text})
    print(f"{value:.12f}")
    if args.certify:
        if cert_text is None:
            cert_text = _norm.norming_tree(vec, params, cfg.support_cap).serialize() + "\n"
        with open(args.certify, "w", encoding="utf-8") as fh:
            fh.write(cert_text)
    return 0


def cmd_dual(args) -> int:
    cfg = _config_from(args)
    params = make_space_params(cfg.p, cfg.gamma)
    vec = read_vector_csv(args.vector, side=DUAL)
    facet_log: list[str] = []
    res = _dual.dual_norm(vec, params, tol=cfg.tol, support_cap=cfg.dual_cap,
                          max_cuts=cfg.cut_cap, facet_log=facet_log)
    print(f"{res.value:.9f}")
    print(f"converged={res.converged} facets={res.facets_used}")
    if args.witness:
        write_vector_csv(args.witness, res.witness)
    if args.facets:
        with open(args.facets, "w", encoding="utf-8") as fh:
            fh.write("\n".join(facet_log) + "\n")
    if not res.converged:
        print("dual norm did not converge within the cut cap", file=sys.stderr)
        return 3
    return 0


def cmd_certify(args) -> int:
    cfg = _config_from(args)
    params = make_space_params(cfg.p, cfg.gamma)
    vec = read_vector_csv(args.vector)
    res = _norm.ti_norm(vec, params, support_cap=cfg.support_cap)
    text = res.certificate.serialize() + "\n"
    print(f"{res.value:.12f}")
    if args.cert_out:
        with open(args.cert_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _run_suite(suite: str, cfg: RunConfig, args) -> CheckReport:
    params = make_space_params(cfg.p, cfg.gamma)
    trials = cfg.trials
    if args.trials is None and suite in _SUITE_DEFAULT_TRIALS:
        trials = _SUITE_DEFAULT_TRIALS[suite]
    seed = cfg.seed
    if suite == "prop1":
        return check_prop1(params, trials, seed)
    if suite == "prop2":
        return check_prop2(params, args.n if args.n else 8, trials, seed)
    if suite == "prop3":
        return check_prop3(params, trials, seed)
    if suite == "lemma4":
        return check_lemma4(params, trials, seed)
    if suite == "lemma6":
        return domination_suite(params, DUAL, trials, seed)
    if suite == "lemma7":
        return check_lemma7(params, args.n if args.n else 8, trials, seed)
    if suite == "invariance":
        return check_invariance(params, trials, seed)
    if suite == "oracle-norm":
        return check_oracle_norm(params, trials, seed)
    if suite == "oracle-dual":
        return check_oracle_dual(params, trials, seed)
    if suite == "prop9":
        sched = prop9_parameters(2, params)
        print("================ RELAXED MODE ================")
        print(f"exact schedule at m=2: epsilon={sched.epsilon:.6g} "
              f"delta={sched.delta:.6g} delta'<{sched.delta_prime_bound:.6g}")
        print(f"required flat support ~ {sched.required_support_estimate:.3g} "
              f"(infeasible at desk scale: M_hint={sched.M_hint})")
        print(f"running relaxed profile: eta={args.eta} m<={args.m} "
              f"support_budget={args.support_budget}")
        print("==============================================")
        return asymptotic_lq_profile(params, args.m, args.eta,
                                     args.support_budget, trials, seed)
    raise ValueError(f"unknown suite {suite!r}")


def _suite_cache_key(suite: str, cfg: RunConfig, args) -> str:
    params = make_space_params(cfg.p, cfg.gamma)
    extras = {
        "seed": cfg.seed,
        "trials": cfg.trials if args.trials is not None
        else _SUITE_DEFAULT_TRIALS.get(suite, cfg.trials),
        "tol": cfg.tol,
        "n": args.n or 0,
        "m": getattr(args, "m", 0),
        "eta": float(getattr(args, "eta", 0.0)),
        "budget": getattr(args, "support_budget", 0),
        "support_cap": cfg.support_cap,
        "dual_cap": cfg.dual_cap,
        "cut_cap": cfg.cut_cap,
    }
    return cache_key("check", suite, params_hash(params, **extras))


def cmd_check(args) -> int:
    cfg = _config_from(args)
    suite = args.suite
    os.makedirs(cfg.out, exist_ok=True)
    cache = None if args.no_cache else ResultCache(cfg.out)
    key = _suite_cache_key(suite, cfg, args)
    t0 = time.perf_counter()
    if cache is not None and (hit := cache.get(key)) is not None:
        report_json = hit["report_json"]
        margins_csv = hit["margins_csv"]
        passed = bool(hit["passed"])
        print(f"[cache] suite {suite}")
    else:
        report = _run_suite(suite, cfg, args)
        params = make_space_params(cfg.p, cfg.gamma)
        trials = cfg.trials if args.trials is not None else \
            _SUITE_DEFAULT_TRIALS.get(suite, cfg.trials)
        report_json = canonical_json(report_to_dict(report, params, trials, cfg.seed))
        margins_csv = format_margins_csv(report)
        passed = report.passed
        if cache is not None:
            cache.put(key, {"op": "check", "suite": suite, "passed": passed,
                            "report_json": report_json, "margins_csv": margins_csv})
    wall_ms = int(1000 * (time.perf_counter() - t0))
    if "json" in cfg.formats:
        with open(os.path.join(cfg.out, f"{suite}.json"), "w", encoding="utf-8") as fh:
            fh.write(report_json)
    if "csv" in cfg.formats:
        with open(os.path.join(cfg.out, f"{suite}_margins.csv"), "w", encoding="utf-8") as fh:
            fh.write(margins_csv)
    doc = json.loads(report_json)
    print(f"suite {suite}: passed={passed} margin_min={doc['margins']['min']:.3g} "
          f"trials={doc['trials']} (wall {wall_ms} ms)")
    return 0 if passed else 1


_STRICT_SUITES = {"prop2", "prop3", "lemma4", "prop9"}


def cmd_sweep(args) -> int:
    cfg = _config_from(args)
    try:
        p_grid = [float(x) for x in args.p_grid.split(",") if x.strip()]
        gamma_grid = [float(x) for x in args.gamma_grid.split(",") if x.strip()]
    except ValueError as exc:
        print(f"bad grid: {exc}", file=sys.stderr)
        return 2
    if not p_grid or not gamma_grid:
        print("empty grid", file=sys.stderr)
        return 2
    rows = ["p,gamma,suite,statistic,value,status"]
    for p in p_grid:
        for gamma in gamma_grid:
            params = make_space_params(p, gamma)
            if args.suite in _STRICT_SUITES and not params.strict_regime:
                rows.append(f"{p!r},{gamma!r},{args.suite},margin_min,,skipped")
                continue
            sub_args = argparse.Namespace(**vars(args))
            sub_args.p, sub_args.gamma = p, gamma
            sub_cfg = _config_from(sub_args)
            report = _run_suite(args.suite, sub_cfg, sub_args)
            rows.append(
                f"{p!r},{gamma!r},{args.suite},margin_min,{report.margin_min!r},ok"
            )
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, f"sweep_{args.suite}.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")
    print(path)
    return 0


def cmd_search_witness(args) -> int:
    cfg = _config_from(args)
    params = make_space_params(cfg.p, cfg.gamma)
    vec, perm, ratio = symmetry_witness_search(params, args.size, args.budget, cfg.seed)
    print(f"best ratio {ratio!r} at size {args.size} (exploratory; no claim)")
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, "witness.json")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json({
            "ratio": ratio,
            "permutation": list(perm),
            "vector": [[p, c] for p, c in vec.to_pairs()],
        }))
    print(path)
    return 0


def cmd_oracle_compare(args) -> int:
    cfg = _config_from(args)
    params = make_space_params(cfg.p, cfg.gamma)
    if args.which == "norm":
        report = check_oracle_norm(params, cfg.trials, cfg.seed)
    else:
        report = check_oracle_dual(params, cfg.trials, cfg.seed)
    print(f"oracle-{args.which}: passed={report.passed} "
          f"worst_rel_diff={-report.margin_min:.3g}")
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (CapExceeded, RegimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LpFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
