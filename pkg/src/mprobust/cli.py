"""Command-line harness: generate instances, run the loop, evaluate,
verify against oracles, and aggregate report tables.

Exit codes: 0 ok, 2 iteration/time budget exceeded (partial artifacts are
kept), 3 verification failed, 4 bad input.  The default solver backend can
be overridden with the MPROBUST_BACKEND environment variable or --backend.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from math import comb
from pathlib import Path
from typing import Optional

import numpy as np

from .engine import Budget, MprsResult, pick_best, run_aq
from .generators import (
    PartitionScheme, PlmParams, SpParams, apply_partition, build_omega,
    gen_plm, gen_sp,
)
from .milp import SolverConfig, write_mps
from .oracle import (
    MAX_ENUM, PiEnumerationOracle, enumerate_x, robustness_matrix, toy_instance,
)
from .robust import build_robust_milp, build_robust_variant_milp, solve_robust
from .serialize import (
    dumps_canonical, instance_from_dict, instance_to_dict, load_json,
    omega_from_dict, omega_to_dict, result_from_dict, result_to_dict, save_json,
)
from .uncertainty import (
    Instance, OmegaSpec, robustness_value, robustness_value_variant,
    sample_gamma, solution_signature, verify_feasible,
)

EXIT_OK = 0
EXIT_BUDGET = 2
EXIT_VERIFY = 3
EXIT_BAD_INPUT = 4


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# independent guarantee verification (reads only the stored x vectors)
# ---------------------------------------------------------------------------

def _reference_fn(inst: Instance, mode: str, config):
    """Robust-value reference: oracle when small, solver otherwise."""
    variant = mode == "variant"
    if not variant and inst.num_groups <= 12:
        try:
            if inst.kind in ("SP", "TOY") or \
               (inst.kind == "PLM" and comb(int(inst.metadata["l"]),
                                            int(inst.metadata["p"])) <= 200_000) or \
               inst.n <= 24:
                oracle = PiEnumerationOracle(inst)
                return oracle.robust_value, "pattern-oracle"
        except ValueError:
            pass
    try:
        X = enumerate_x(inst)
        if X.shape[0] <= MAX_ENUM:
            def by_enum(gamma):
                return float(np.min(robustness_matrix(inst, X, gamma, variant=variant)))
            return by_enum, "enumeration"
    except ValueError:
        pass

    def by_solver(gamma):
        return solve_robust(inst, gamma, mode="variant" if variant else "standard",
                            config=config).value
    return by_solver, "solver"


def verify_solution_set(inst: Instance, omega: OmegaSpec, xs, epsilon: float,
                        mode: str = "standard", grid_m: int = 5,
                        uniform: int = 100, config: Optional[SolverConfig] = None) -> dict:
    """Sample the domain and check min-over-set robustness against the optimum.

    Returns max absolute/relative gaps, the witness gamma, and the pass flag
    (gap <= epsilon + 1e-6).  Only the solution vectors are consulted.
    """
    xs = [np.asarray(x, dtype=float) for x in xs]
    if not xs:
        raise CliError("empty solution set")
    variant = mode == "variant"
    evaluate = robustness_value_variant if variant else robustness_value
    ref, route = _reference_fn(inst, mode, config)
    samples = [sample_gamma(omega, "grid", m=grid_m)]
    if omega.kind != "segment" and omega.num_groups <= 20:
        samples.append(sample_gamma(omega, "vertices"))
    if uniform > 0:
        samples.append(sample_gamma(omega, "uniform", seed=0, count=uniform))
    worst = -np.inf
    worst_rel = 0.0
    witness = None
    checked = 0
    for gamma in np.vstack(samples):
        best = min(evaluate(inst, x, gamma) for x in xs)
        opt = ref(gamma)
        gap = best - opt
        checked += 1
        if gap > worst:
            worst = gap
            witness = gamma
        if opt > 1e-12:
            worst_rel = max(worst_rel, gap / opt)
    return {
        "max_gap": float(worst),
        "max_relative_gap": float(worst_rel),
        "witness_gamma": [float(v) for v in witness],
        "checked": checked,
        "reference": route,
        "epsilon": float(epsilon),
        "ok": bool(worst <= epsilon + 1e-6),
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _load_instance(path) -> Instance:
    try:
        inst = instance_from_dict(load_json(path))
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot load instance {path}: {exc}") from exc
    return inst


def cmd_generate(args) -> int:
    if args.family == "sp":
        inst = gen_sp(SpParams(args.nodes, seed=args.seed))
        default_scheme = "r"
    elif args.family == "plm":
        inst = gen_plm(PlmParams(args.l, args.p, seed=args.seed))
        default_scheme = "lo"
    else:
        inst, omega1, omega2 = toy_instance(args.n)
        md = dict(inst.metadata)
        md["toy_omega1"] = omega_to_dict(omega1)
        md["toy_omega2"] = omega_to_dict(omega2)
        from dataclasses import replace
        inst = replace(inst, metadata=md)
    if args.family != "toy" and args.k is not None:
        scheme = PartitionScheme(args.partition or default_scheme, args.k)
        inst = apply_partition(inst, scheme, seed=args.partition_seed)
    verify_feasible(inst)
    save_json(instance_to_dict(inst), args.out)
    print(f"wrote {inst.kind} instance: n={inst.n} K={inst.num_groups} -> {args.out}")
    return EXIT_OK


def _omega_from_args(inst: Instance, args) -> OmegaSpec:
    if args.omega in ("toy1", "toy2"):
        key = "toy_omega1" if args.omega == "toy1" else "toy_omega2"
        if key not in inst.metadata:
            raise CliError(f"instance has no stored {key}")
        return omega_from_dict(inst.metadata[key])
    return build_omega(inst, args.omega, delta=args.delta,
                       alpha_lo=args.alpha_lo, alpha_hi=args.alpha_hi,
                       beta1=args.beta1, beta2=args.beta2,
                       segment_scale=args.segment_scale)


def cmd_run(args) -> int:
    inst = _load_instance(args.instance)
    omega = _omega_from_args(inst, args)
    config = SolverConfig(backend=args.backend) if args.backend else SolverConfig()

    if args.epsilon is not None:
        epsilon = args.epsilon
        eps_mode = {"kind": "absolute", "value": float(epsilon)}
    else:
        pct = args.epsilon_pct if args.epsilon_pct is not None else 1.0
        seed_sol = solve_robust(inst, omega.start_gamma, mode=args.mode, config=config)
        epsilon = (pct / 100.0) * seed_sol.value
        eps_mode = {"kind": "relative", "pct": float(pct)}

    trace_fh = open(args.trace, "w") if args.trace else None

    def trace(rec):
        if trace_fh is not None:
            trace_fh.write(json.dumps(rec) + "\n")

    try:
        res = run_aq(inst, omega, epsilon, mode=args.mode, config=config,
                     budget=Budget(max_iters=args.max_iters,
                                   time_limit=args.time_limit),
                     trace=trace)
    finally:
        if trace_fh is not None:
            trace_fh.close()

    save_json(result_to_dict(res, instance_path=str(args.instance),
                             epsilon_mode=eps_mode), args.out)
    if args.mps_dir:
        outdir = Path(args.mps_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        rmodel = (build_robust_variant_milp if args.mode == "variant"
                  else build_robust_milp)(inst, omega.start_gamma)
        write_mps(rmodel, outdir / "r_init.mps")
        from .engine import _build_master
        qmodel, _ = _build_master(inst, omega, res.history, args.mode)
        write_mps(qmodel, outdir / "q_final.mps")
    print(f"stop={res.stop_reason} iterations={res.iterations} "
          f"distinct={res.num_distinct} first_bound_pct={res.first_bound_pct:.1f} "
          f"elapsed={res.elapsed:.2f}s -> {args.out}")
    return EXIT_BUDGET if res.stop_reason == "budget_exceeded" else EXIT_OK


def _load_result(args) -> tuple:
    d = load_json(args.result)
    inst_path = args.instance or d.get("instance_path")
    if not inst_path:
        raise CliError("result carries no instance path; pass --instance")
    inst = _load_instance(inst_path)
    return result_from_dict(d, instance=inst), inst, d


def _parse_vector(text: str, n: int, label: str) -> np.ndarray:
    try:
        v = np.array([float(t) for t in text.split(",")], dtype=float)
    except ValueError as exc:
        raise CliError(f"bad {label} vector: {exc}") from exc
    if v.shape[0] != n:
        raise CliError(f"{label} vector needs {n} entries, got {v.shape[0]}")
    return v


def cmd_evaluate(args) -> int:
    res, inst, _ = _load_result(args)
    if (args.gamma is None) == (args.cost is None):
        raise CliError("give exactly one of --gamma or --cost")
    if args.gamma is not None:
        gamma = _parse_vector(args.gamma, inst.num_groups, "gamma")
        idx, value = pick_best(res, gamma=gamma)
    else:
        cost = _parse_vector(args.cost, inst.n, "cost")
        idx, value = pick_best(res, cost=cost)
    x = res.history[idx].x
    out = {
        "index": idx,
        "value": value,
        "x": [int(round(v)) for v in x],
        "signature": list(solution_signature(inst, x)),
    }
    print(dumps_canonical(out), end="")
    return EXIT_OK


def cmd_verify(args) -> int:
    res, inst, _ = _load_result(args)
    config = SolverConfig(backend=args.backend) if args.backend else SolverConfig()
    report = verify_solution_set(
        inst, res.omega, [np.array(t, dtype=float) for t in res.distinct_x],
        res.epsilon, mode=res.mode, grid_m=args.grid, uniform=args.uniform,
        config=config)
    print(dumps_canonical(report), end="")
    return EXIT_OK if report["ok"] else EXIT_VERIFY


def cmd_report(args) -> int:
    rows = {}
    paths = sorted(Path(args.dir).glob("*.json"))
    for path in paths:
        try:
            d = load_json(path)
        except (OSError, json.JSONDecodeError):
            continue
        if d.get("format") != "mprs-result-v1":
            continue
        em = d.get("epsilon_mode", {})
        eps_tag = (f"rel{em['pct']}%" if em.get("kind") == "relative"
                   else f"abs{em.get('value', d['epsilon'])}")
        key = (d.get("instance_kind") or "?", d["omega"]["kind"], d["mode"], eps_tag)
        rows.setdefault(key, []).append(d)
    if not rows:
        raise CliError(f"no result files under {args.dir}")
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["instance", "omega", "mode", "epsilon",
                     "runs", "t_avg", "t_max", "s_min", "s_avg", "s_max",
                     "eps1_avg"])
    for key in sorted(rows):
        ds = rows[key]
        times = [d["timing"]["elapsed"] for d in ds]
        counts = [d["distinct_count"] for d in ds]
        firsts = [d["first_bound_pct"] for d in ds if d["first_bound_pct"] != "inf"]
        writer.writerow(list(key) + [
            len(ds),
            round(float(np.mean(times)), 1), round(float(np.max(times)), 1),
            int(np.min(counts)), round(float(np.mean(counts)), 1), int(np.max(counts)),
            round(float(np.mean(firsts)), 1) if firsts else "",
        ])
    text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mprobust", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate an instance file")
    g.add_argument("family", choices=["sp", "plm", "toy"])
    g.add_argument("--nodes", type=int, default=10, help="sp: node count")
    g.add_argument("--l", type=int, default=10, help="plm: location count")
    g.add_argument("--p", type=int, default=None, help="plm: median count (default l//10)")
    g.add_argument("--n", type=int, default=2, help="toy: size parameter")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--partition", choices=["r", "p", "d", "lo", "g"], default=None)
    g.add_argument("--k", type=int, default=None, help="group count for the partition")
    g.add_argument("--partition-seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_generate)

    r = sub.add_parser("run", help="run the multiparametric loop")
    r.add_argument("--instance", required=True)
    r.add_argument("--omega", required=True,
                   choices=["interval", "segment", "budgeted", "toy1", "toy2"])
    r.add_argument("--delta", type=float, default=0.0)
    r.add_argument("--alpha-lo", type=float, default=0.0)
    r.add_argument("--alpha-hi", type=float, default=1.0)
    r.add_argument("--beta1", type=float, default=0.5)
    r.add_argument("--beta2", type=float, default=1.0)
    r.add_argument("--segment-scale", type=float, default=None)
    r.add_argument("--mode", choices=["standard", "tu_relaxed", "variant"],
                   default="standard")
    r.add_argument("--epsilon", type=float, default=None, help="absolute tolerance")
    r.add_argument("--epsilon-pct", type=float, default=None,
                   help="relative tolerance as a percent of the start robust value")
    r.add_argument("--max-iters", type=int, default=500)
    r.add_argument("--time-limit", type=float, default=3600.0)
    r.add_argument("--backend", default=None)
    r.add_argument("--trace", default=None, help="line-delimited iteration trace")
    r.add_argument("--mps-dir", default=None, help="export key models as MPS files")
    r.add_argument("--out", required=True)
    r.set_defaults(fn=cmd_run)

    e = sub.add_parser("evaluate", help="pick the best stored solution for a scenario")
    e.add_argument("--result", required=True)
    e.add_argument("--instance", default=None)
    e.add_argument("--gamma", default=None, help="comma-separated budget vector")
    e.add_argument("--cost", default=None, help="comma-separated cost vector")
    e.set_defaults(fn=cmd_evaluate)

    v = sub.add_parser("verify", help="independently check the epsilon guarantee")
    v.add_argument("--result", required=True)
    v.add_argument("--instance", default=None)
    v.add_argument("--grid", type=int, default=5)
    v.add_argument("--uniform", type=int, default=100)
    v.add_argument("--backend", default=None)
    v.set_defaults(fn=cmd_verify)

    rep = sub.add_parser("report", help="aggregate result files into a CSV table")
    rep.add_argument("--dir", required=True)
    rep.add_argument("--out", default=None)
    rep.set_defaults(fn=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_BAD_INPUT
    try:
        return args.fn(args)
    except (CliError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
