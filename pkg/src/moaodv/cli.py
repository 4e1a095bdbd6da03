"""Command-line entry point: ``moaodv <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import experiment as ex
from .fitness import (
    REFERENCE_CONFIGS,
    default_scenario,
    load_scenario,
    save_scenario,
    simulate_vanet,
    validation_scenarios,
    vanet_problem,
    zdt1_problem,
)
from .indicators import ReferenceFront, indicator_triple
from .parallel import benchmark_pool, measure_efficiency
from .space import AODV_SPACE, genome_as_dict, read_genomes_csv, validate_genome
from .stats import friedman_rank, wilcoxon_signed_rank
from .stopping import StopCriterion

log = logging.getLogger("moaodv")


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _problem(args):
    if args.backend == "zdt1":
        return zdt1_problem(args.n_var)
    sc = load_scenario(args.scenario) if args.scenario else default_scenario()
    if args.duration is not None:
        sc = sc.with_duration(args.duration)
    return vanet_problem(sc)


def _reference(path):
    if not path:
        return None
    return ReferenceFront.from_points(ex.read_front_csv(path))


def _engine_config(args) -> dict:
    cfg = {}
    if args.algorithm == "nsga2":
        if args.pop is not None:
            cfg["population_size"] = args.pop
        if args.pc is not None:
            cfg["crossover_prob"] = args.pc
    elif args.pop is not None:
        cfg["swarm_size"] = args.pop
    if args.pm is not None:
        cfg["mutation_prob"] = args.pm
    return cfg


def cmd_optimize(args) -> int:
    problem = _problem(args)
    reference = _reference(args.reference)
    threshold = args.hv_threshold
    if threshold is None and reference is not None:
        threshold = ex.DEFAULT_HV_THRESHOLD
    stop = StopCriterion(args.max_gens, threshold, reference)
    seeds = [args.seed + i for i in range(args.reps)] if args.reps > 1 else [args.seed]
    records = ex.run_experiment(args.algorithm, _engine_config(args), stop, len(seeds), seeds,
                                problem, workers=args.workers, executor=args.executor)
    out = Path(args.out)
    space = problem.space
    failed = 0
    for rec in records:
        target = out if len(records) == 1 else out / f"run_{rec.seed}"
        extra = {"backend": args.backend, "scenario": args.scenario, "workers": args.workers}
        ex.save_run(rec, target, space, extra)
        if rec.failed:
            failed += 1
            print(f"seed {rec.seed}: FAILED {rec.error}", file=sys.stderr)
            continue
        hv = rec.indicators[0] if rec.indicators else float("nan")
        print(f"seed {rec.seed}: {rec.generations_used} generations, "
              f"{len(rec.front)} front points, hv {hv:.4f}, {rec.wall_seconds:.1f}s -> {target}")
    return 1 if failed else 0


def cmd_tune(args) -> int:
    problem = _problem(args)
    cells = ex.tune_sweep(args.algorithm, args.pc_grid, args.pm_grid, args.reps, problem,
                          args.max_gens, args.seed, args.workers, args.executor)
    ex.write_sweep_csv(args.out, cells)
    for c in cells:
        mark = " *" if c.best else ""
        pc = "-" if c.p_c is None else f"{c.p_c:g}"
        print(f"p_c={pc:>4} p_m={c.p_m:<6g} median hv {c.median_hv:.4f}{mark}")
    runs = args.reps * len(cells)
    return 0 if all(len(c.hypervolumes) == args.reps for c in cells) and runs else 1


def cmd_indicators(args) -> int:
    F = ex.read_front_csv(args.front)
    ref = ReferenceFront.from_points(ex.read_front_csv(args.reference))
    hv, eps, spr = indicator_triple(F, ref)
    print("hypervolume,epsilon,spread")
    print(f"{hv!r},{eps!r},{spr!r}")
    return 0


def cmd_stats(args) -> int:
    if args.test == "wilcoxon":
        res = wilcoxon_signed_rank(ex.read_sample_csv(args.a), ex.read_sample_csv(args.b))
        print(json.dumps({"r_plus": res.r_plus, "r_minus": res.r_minus, "p_value": res.p_value,
                          "n": res.n, "degenerate": res.degenerate}))
    else:
        res = friedman_rank(ex.read_matrix_csv(args.matrix))
        print(json.dumps({"mean_ranks": res.mean_ranks.tolist(), "chi_square": res.statistic,
                          "p_value": res.p_value}))
    return 0


def cmd_select(args) -> int:
    F = ex.read_front_csv(args.front)
    G = read_genomes_csv(args.genomes)
    genome, objectives = ex.select_compromise(F, G)
    print(json.dumps({
        "objectives": objectives.tolist(),
        "genome": genome_as_dict(AODV_SPACE, genome) if len(genome) == len(AODV_SPACE) else genome.tolist(),
        "valid": bool(len(genome) == len(AODV_SPACE) and validate_genome(AODV_SPACE, genome)),
    }))
    return 0


def cmd_bench(args) -> int:
    delay = args.delay_ms / 1000.0
    sequential = benchmark_pool(1, delay, args.batch, args.batches, args.executor)
    print("workers  mean_batch_s  speedup  efficiency")
    for m in args.workers_list:
        times = sequential if m == 1 else benchmark_pool(m, delay, args.batch, args.batches, args.executor)
        speedup, eff = measure_efficiency(times, sequential, m)
        print(f"{m:7d}  {float(np.mean(times)):12.4f}  {speedup:7.3f}  {eff:10.3f}")
    return 0


def cmd_scenarios(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_scenario(default_scenario(args.duration), out / "default.scn")
    for i, sc in enumerate(validation_scenarios(args.seed, args.duration)):
        save_scenario(sc, out / f"validation_{i:02d}.scn")
    print(f"wrote 31 scenarios to {out}")
    return 0


def cmd_evaluate(args) -> int:
    sc = load_scenario(args.scenario) if args.scenario else default_scenario()
    if args.duration is not None:
        sc = sc.with_duration(args.duration)
    if args.genomes:
        genomes = read_genomes_csv(args.genomes)
        names = [f"row{i}" for i in range(len(genomes))]
    else:
        names = list(REFERENCE_CONFIGS)
        genomes = [REFERENCE_CONFIGS[k] for k in names]
    for name, g in zip(names, genomes):
        print(json.dumps({"config": name, **simulate_vanet(sc, g).as_dict()}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="moaodv", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def problem_args(sp):
        sp.add_argument("--algorithm", choices=sorted(ex.ENGINES), default="nsga2")
        sp.add_argument("--backend", choices=("vanet", "zdt1"), default="vanet")
        sp.add_argument("--scenario", help="scenario file (default: built-in 30-vehicle scenario)")
        sp.add_argument("--duration", type=float, help="override simulated seconds")
        sp.add_argument("--n-var", type=int, default=30, help="ZDT1 dimension")
        sp.add_argument("--seed", type=int, default=1)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--executor", choices=("thread", "process"), default="thread")

    sp = sub.add_parser("optimize", help="run one engine")
    problem_args(sp)
    sp.add_argument("--pop", type=int)
    sp.add_argument("--pc", type=float)
    sp.add_argument("--pm", type=float)
    sp.add_argument("--max-gens", type=int, default=ex.DEFAULT_MAX_GENERATIONS)
    sp.add_argument("--hv-threshold", type=float)
    sp.add_argument("--reference", help="reference front CSV for normalisation")
    sp.add_argument("--reps", type=int, default=1)
    sp.add_argument("--out", default="run")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("tune", help="p_C x p_M median-hypervolume sweep")
    problem_args(sp)
    sp.add_argument("--pc-grid", type=_floats, default=list(ex.PC_GRID))
    sp.add_argument("--pm-grid", type=_floats, default=list(ex.PM_GRID))
    sp.add_argument("--reps", type=int, default=10)
    sp.add_argument("--max-gens", type=int, default=100)
    sp.add_argument("--out", default="tune.csv")
    sp.set_defaults(func=cmd_tune)

    sp = sub.add_parser("indicators", help="hypervolume, epsilon and spread of a front")
    sp.add_argument("--front", required=True)
    sp.add_argument("--reference", required=True)
    sp.set_defaults(func=cmd_indicators)

    sp = sub.add_parser("stats", help="Wilcoxon or Friedman test")
    ssub = sp.add_subparsers(dest="test", required=True)
    w = ssub.add_parser("wilcoxon")
    w.add_argument("--a", required=True)
    w.add_argument("--b", required=True)
    w.set_defaults(func=cmd_stats)
    f = ssub.add_parser("friedman")
    f.add_argument("--matrix", required=True)
    f.set_defaults(func=cmd_stats)

    sp = sub.add_parser("select", help="compromise solution closest to the ideal vector")
    sp.add_argument("--front", required=True)
    sp.add_argument("--genomes", required=True)
    sp.set_defaults(func=cmd_select)

    sp = sub.add_parser("bench-parallel", help="speedup and efficiency of the worker pool")
    sp.add_argument("--workers-list", type=_ints, default=[1, 2, 4, 8])
    sp.add_argument("--delay-ms", type=float, default=100.0)
    sp.add_argument("--batch", type=int, default=24)
    sp.add_argument("--batches", type=int, default=10)
    sp.add_argument("--executor", choices=("thread", "process"), default="thread")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("scenarios", help="write the default and 30 validation scenarios")
    sp.add_argument("--out", default="scenarios")
    sp.add_argument("--seed", type=int, default=1000)
    sp.add_argument("--duration", type=float, default=180.0)
    sp.set_defaults(func=cmd_scenarios)

    sp = sub.add_parser("evaluate", help="simulate reference or given configurations")
    sp.add_argument("--scenario")
    sp.add_argument("--duration", type=float)
    sp.add_argument("--genomes", help="genome CSV; default: built-in reference configurations")
    sp.set_defaults(func=cmd_evaluate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"moaodv: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
