"""Independent-run campaigns, parameter sweeps, compromise selection and run files."""

from __future__ import annotations

import csv
import json
import logging
import time
import traceback
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .base import Problem
from .indicators import ReferenceFront, indicator_triple, merge_reference_front
from .nsga2 import NSGA2
from .parallel import WorkerPool
from .smpso import SMPSO
from .space import ParameterSpace, write_genomes_csv
from .stopping import StopCriterion
from .utils.random import derive_seeds

log = logging.getLogger(__name__)

ENGINES = {"nsga2": NSGA2, "smpso": SMPSO}

DEFAULT_CONFIGS = {
    "nsga2": {"population_size": 24, "crossover_prob": 0.9, "mutation_prob": 0.023},
    "smpso": {"swarm_size": 24, "mutation_prob": 0.091},
}

DEFAULT_HV_THRESHOLD = 0.785
DEFAULT_MAX_GENERATIONS = 450

# mutation grid 1/(4L), 1/(2L), 1/L, 2/L for L = 11 parameters
PM_GRID = (0.023, 0.045, 0.091, 0.182)
PC_GRID = (0.3, 0.5, 0.7, 0.9)


def default_stop(reference: ReferenceFront | None = None,
                 max_generations: int = DEFAULT_MAX_GENERATIONS) -> StopCriterion:
    """Threshold plus cap when a reference front is known, cap only otherwise."""
    if reference is None:
        return StopCriterion(max_generations)
    return StopCriterion(max_generations, DEFAULT_HV_THRESHOLD, reference)


def make_estimator(engine: str, config: dict | None = None, stop: StopCriterion | None = None,
                   random_state=None, workers: int = 1, executor: str = "thread"):
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; expected one of {sorted(ENGINES)}")
    params = dict(DEFAULT_CONFIGS[engine])
    params.update(config or {})
    return ENGINES[engine](stop=stop, random_state=random_state, workers=workers,
                           executor=executor, **params)


@dataclass
class RunRecord:
    algorithm: str
    seed: int
    generations_used: int = 0
    wall_seconds: float = 0.0
    evaluations: int = 0
    front: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    genomes: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))
    metrics: list = field(default_factory=list)
    history: list = field(default_factory=list)
    indicators: tuple | None = None
    config: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def metadata(self) -> dict:
        hv, eps, spr = self.indicators if self.indicators else (None, None, None)
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "config": self.config,
            "generations": self.generations_used,
            "wall_seconds": self.wall_seconds,
            "evaluations": self.evaluations,
            "front_size": int(len(self.front)),
            "hypervolume": hv,
            "epsilon": eps,
            "spread": spr,
            "failed": self.failed,
            "error": self.error,
        }


def attach_indicators(records: list[RunRecord], reference: ReferenceFront | None = None) -> ReferenceFront | None:
    """Fill each successful record's indicator triple.

    Without ``reference`` the merged front of all successful runs serves as
    the reference. Returns the reference used.
    """
    ok = [r for r in records if not r.failed and len(r.front)]
    if not ok:
        return reference
    if reference is None:
        reference = merge_reference_front([r.front for r in ok])
        if np.any(reference.upper - reference.lower <= 0):
            # a single point: widen to the nominal box so normalisation is defined
            lo, hi = reference.lower, np.maximum(reference.upper, reference.lower + 1.0)
            reference = ReferenceFront(reference.points, tuple(zip(lo, hi)))
    for r in ok:
        r.indicators = indicator_triple(r.front, reference)
    return reference


def run_experiment(engine: str, config: dict | None, stop: StopCriterion, repetitions: int,
                   seeds=None, problem: Problem | None = None, base_seed: int = 0,
                   workers: int = 1, executor: str = "thread", pool: WorkerPool | None = None,
                   reference: ReferenceFront | None = None) -> list[RunRecord]:
    """Run ``repetitions`` independent optimisations, one per seed.

    Seeds default to ``derive_seeds(base_seed, repetitions)``. A failing run is
    recorded with its error and the campaign continues.
    """
    if problem is None:
        raise ValueError("run_experiment needs a problem")
    if seeds is None:
        seeds = derive_seeds(base_seed, repetitions)
    seeds = [int(s) for s in seeds]
    if len(seeds) != repetitions:
        raise ValueError(f"expected {repetitions} seeds, got {len(seeds)}")
    own_pool = pool is None
    pool = pool or WorkerPool(workers, kind=executor)
    records = []
    try:
        for seed in seeds:
            est = make_estimator(engine, config, stop, seed, workers, executor)
            rec = RunRecord(engine, seed, config=_plain(est.get_params()))
            t0 = time.perf_counter()
            try:
                est.fit(problem, pool=pool)
            except Exception as exc:  # noqa: BLE001 - a failed repetition is data
                rec.error = f"{type(exc).__name__}: {exc}"
                rec.wall_seconds = time.perf_counter() - t0
                log.warning("run %s seed %d failed: %s\n%s", engine, seed, exc, traceback.format_exc())
                records.append(rec)
                continue
            rec.generations_used = est.n_generations_
            rec.wall_seconds = est.result_.wall_seconds
            rec.evaluations = est.n_evaluations_
            rec.front = est.front_
            rec.genomes = est.genomes_
            rec.metrics = est.result_.metrics
            rec.history = est.history_
            records.append(rec)
            log.info("run %s seed %d: %d generations, %d front points, %.1fs",
                     engine, seed, rec.generations_used, len(rec.front), rec.wall_seconds)
    finally:
        if own_pool:
            pool.close()
    attach_indicators(records, reference if reference is not None else stop.reference)
    return records


def select_compromise(front, genomes) -> tuple[np.ndarray, np.ndarray]:
    """Member closest to the ideal vector after per-objective extent scaling.

    Objectives with zero extent contribute nothing; ties go to the smaller f1.
    """
    F = np.asarray(front, dtype=float).reshape(-1, 2)
    G = np.asarray(genomes, dtype=float)
    if len(F) == 0:
        raise ValueError("cannot select from an empty front")
    if len(G) != len(F):
        raise ValueError("front and genomes are not aligned")
    ideal = F.min(axis=0)
    extent = F.max(axis=0) - ideal
    scale = np.where(extent > 0, extent, 1.0)
    N = np.where(extent > 0, (F - ideal) / scale, 0.0)
    dist = np.sqrt(np.sum(N**2, axis=1))
    best = np.flatnonzero(np.isclose(dist, dist.min(), rtol=0, atol=1e-12))
    i = best[np.argmin(F[best, 0])]
    return G[i].copy(), F[i].copy()


@dataclass
class SweepCell:
    algorithm: str
    p_c: float | None
    p_m: float
    hypervolumes: list
    best: bool = False

    @property
    def median_hv(self) -> float:
        return float(np.median(self.hypervolumes)) if self.hypervolumes else float("nan")


def tune_sweep(engine: str, pc_grid, pm_grid, repetitions: int, problem: Problem,
               max_generations: int = 100, base_seed: int = 0, workers: int = 1,
               executor: str = "thread", config: dict | None = None) -> list[SweepCell]:
    """Median final hypervolume for every ``(p_C, p_M)`` cell.

    Every cell reuses the same seeds. Hypervolumes are measured against the
    merged front of all runs in the sweep, and the best median is flagged.
    SMPSO has no crossover, so its grid collapses to the ``p_M`` axis.
    """
    pm_grid = list(pm_grid)
    pc_grid = list(pc_grid) if engine == "nsga2" else [None]
    if not pm_grid or not pc_grid:
        raise ValueError("candidate grids must be non-empty")
    seeds = derive_seeds(base_seed, repetitions)
    stop = StopCriterion(max_generations)
    runs = []
    with WorkerPool(workers, kind=executor) as pool:
        for pc in pc_grid:
            for pm in pm_grid:
                cfg = dict(config or {})
                cfg["mutation_prob"] = pm
                if pc is not None:
                    cfg["crossover_prob"] = pc
                recs = run_experiment(engine, cfg, stop, repetitions, seeds, problem, pool=pool)
                runs.append((pc, pm, recs))
    everything = [r for _, _, recs in runs for r in recs]
    attach_indicators(everything)
    cells = []
    for pc, pm, recs in runs:
        hvs = [r.indicators[0] for r in recs if r.indicators is not None]
        cells.append(SweepCell(engine, pc, pm, hvs))
    scored = [c for c in cells if c.hypervolumes]
    if scored:
        max(scored, key=lambda c: c.median_hv).best = True
    return cells


def write_sweep_csv(path, cells: list[SweepCell]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["algorithm", "p_c", "p_m", "median_hv", "runs", "best"])
        for c in cells:
            w.writerow([c.algorithm, "" if c.p_c is None else c.p_c, c.p_m,
                        f"{c.median_hv:.6f}", len(c.hypervolumes), int(c.best)])


# -- run files -------------------------------------------------------------------

def write_front_csv(path, F) -> None:
    F = np.asarray(F, dtype=float).reshape(-1, 2)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["f1", "f2"])
        w.writerows([[repr(float(a)), repr(float(b))] for a, b in F])


def read_front_csv(path) -> np.ndarray:
    """Two numeric columns; a header row is skipped when present."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                rows.append([float(row[0]), float(row[1])])
            except ValueError:
                if rows:
                    raise
    return np.array(rows, dtype=float).reshape(-1, 2)


def read_matrix_csv(path) -> list[list[float]]:
    """Numeric rows; a non-numeric first row is treated as a header."""
    rows = []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row:
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                if i:
                    raise
    return rows


def read_sample_csv(path) -> np.ndarray:
    """First column of a CSV file as a float vector."""
    return np.array([r[0] for r in read_matrix_csv(path)], dtype=float)


def write_history_csv(path, history) -> None:
    cols = ["generation", "elapsed_seconds", "hypervolume", "front_size", "running_hypervolume"]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols)
        w.writeheader()
        for rec in history:
            w.writerow(rec.row())


def save_run(record: RunRecord, outdir, space=None, extra: dict | None = None) -> Path:
    """Write front.csv, genomes.csv, history.csv, run.json (and metrics.csv when available)."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    write_front_csv(out / "front.csv", record.front)
    G = np.asarray(record.genomes, dtype=float)
    if space is None:
        space = ParameterSpace.box(G.shape[1] if G.ndim == 2 and G.size else 1)
    write_genomes_csv(out / "genomes.csv", space, G.reshape(-1, len(space)))
    write_history_csv(out / "history.csv", record.history)
    if record.metrics and all(m for m in record.metrics):
        with open(out / "metrics.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["pdr", "e2ed_ms", "nrl"])
            for m in record.metrics:
                w.writerow([m["pdr"], m["e2ed_ms"], m["nrl"]])
    meta = record.metadata()
    meta.update(extra or {})
    (out / "run.json").write_text(json.dumps(meta, indent=2, default=_json_default))
    return out


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def _plain(params: dict) -> dict:
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in params.items()
            if v is None or isinstance(v, (bool, int, float, str, tuple))}
