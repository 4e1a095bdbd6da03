"""Problem container, run bookkeeping and the estimator base class."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from sklearn.base import BaseEstimator

from .core import EvaluatedSolution, ParetoArchive
from .indicators import ReferenceFront, front_hypervolume, pareto_filter
from .parallel import WorkerPool
from .space import ParameterSpace
from .stopping import StopCriterion
from .utils.validation import check_is_fitted, check_random_state


@dataclass
class Problem:
    """A search space paired with an evaluator ``genome -> objectives``.

    ``objective_bounds`` is the nominal ``((f1_min, f1_max), (f2_min, f2_max))``
    box used to normalise hypervolume when no reference front is supplied.
    """

    space: ParameterSpace
    evaluator: Callable
    objective_bounds: tuple | None = None
    name: str = "problem"


@dataclass
class GenerationRecord:
    generation: int
    elapsed_seconds: float
    hypervolume: float
    front: np.ndarray
    genomes: np.ndarray
    evaluations: int
    running_hypervolume: float = float("nan")

    @property
    def front_size(self) -> int:
        return len(self.front)

    def row(self) -> dict:
        return {
            "generation": self.generation,
            "elapsed_seconds": self.elapsed_seconds,
            "hypervolume": self.hypervolume,
            "front_size": self.front_size,
            "running_hypervolume": self.running_hypervolume,
        }


@dataclass
class RunResult:
    archive: ParetoArchive
    history: list
    generations_used: int
    evaluations: int
    wall_seconds: float
    population: np.ndarray | None = None
    pool_stats: dict = field(default_factory=dict)

    @property
    def front(self) -> np.ndarray:
        return np.array([m.objectives for m in self.archive.sorted()]).reshape(-1, 2)

    @property
    def genomes(self) -> np.ndarray:
        members = self.archive.sorted()
        if not members:
            return np.empty((0, 0))
        return np.array([m.genome for m in members])

    @property
    def metrics(self) -> list:
        return [m.metrics for m in self.archive.sorted()]


class Recorder:
    """Collects one :class:`GenerationRecord` per generation and applies the stop rule.

    Besides the hypervolume of the current front it tracks the non-dominated
    set of every front seen so far, whose hypervolume can never decrease.
    """

    def __init__(self, stop: StopCriterion, bounds=None, callback=None):
        self.stop = stop
        self.bounds = bounds
        self.callback = callback
        self.history: list[GenerationRecord] = []
        self.running = np.empty((0, 2))
        self.t0 = time.perf_counter()

    def record(self, generation: int, members: list[EvaluatedSolution], evaluations: int) -> bool:
        members = sorted(members, key=lambda m: tuple(m.objectives))
        F = np.array([m.objectives for m in members]).reshape(-1, 2)
        G = np.array([m.genome for m in members])
        hv = self.stop.hypervolume(F, self.bounds)
        merged = np.vstack([self.running, F])
        self.running = pareto_filter(merged) if len(merged) else merged
        running_hv = self._plain_hypervolume(self.running)
        rec = GenerationRecord(generation, time.perf_counter() - self.t0, hv, F, G, evaluations,
                               running_hv)
        self.history.append(rec)
        if self.callback is not None:
            self.callback(rec)
        return self.stop.should_stop(generation, hv)

    def _plain_hypervolume(self, F) -> float:
        ref = self.stop.reference
        if ref is not None:
            return front_hypervolume(F, ref)
        if self.bounds is None:
            return float("nan")
        return front_hypervolume(F, ReferenceFront(np.empty((0, 2)), tuple(map(tuple, self.bounds))))

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.t0


def evaluate_genomes(pool: WorkerPool, evaluator, X):
    batch = pool.map(evaluator, X)
    batch.raise_for_errors()
    return batch.objectives.reshape(len(X), -1), batch.metrics


class BaseOptimizer(BaseEstimator):
    """Shared ``fit`` plumbing for the two engines.

    Subclasses implement ``_run(problem, stop, rng, pool, callback)`` and
    return a :class:`RunResult`. After ``fit`` the estimator exposes
    ``front_``, ``genomes_``, ``history_``, ``n_generations_``,
    ``n_evaluations_``, ``archive_`` and ``run_metadata_``.
    """

    def _stop_criterion(self) -> StopCriterion:
        if getattr(self, "stop", None) is not None:
            return self.stop
        return StopCriterion(self.max_generations, self.hv_threshold, self.reference)

    def fit(self, problem: Problem, y=None, pool: WorkerPool | None = None, callback=None):
        rng = check_random_state(self.random_state)
        stop = self._stop_criterion()
        own_pool = pool is None
        if own_pool:
            pool = WorkerPool(self.workers, kind=self.executor)
        try:
            result = self._run(problem, stop, rng, pool, callback)
        finally:
            if own_pool:
                pool.close()
        self.result_ = result
        self.archive_ = result.archive
        self.front_ = result.front
        self.genomes_ = result.genomes
        self.history_ = result.history
        self.n_generations_ = result.generations_used
        self.n_evaluations_ = result.evaluations
        self.run_metadata_ = {
            "estimator": type(self).__name__,
            "params": {k: v for k, v in self.get_params().items() if _jsonable(v)},
            "generations": result.generations_used,
            "evaluations": result.evaluations,
            "wall_seconds": result.wall_seconds,
            "pool": result.pool_stats,
        }
        return self

    def score(self, problem=None, y=None) -> float:
        """Hypervolume of the final front as tracked by the stop criterion."""
        check_is_fitted(self, ("history_",))
        return float(self.history_[-1].hypervolume)


def _jsonable(v) -> bool:
    return v is None or isinstance(v, (bool, int, float, str))
