"""Master-slave NSGA-II.

The master performs selection, recombination, mutation and the
ranking-and-crowding survival step; only the evaluation of each offspring
batch is handed to the worker pool.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import BaseOptimizer, Problem, Recorder, RunResult, evaluate_genomes
from .core import (
    EvaluatedSolution,
    ParetoArchive,
    crowding_distances,
    nondominated_ranks,
    stratified_init,
    uniform_mutation,
)
from .parallel import WorkerPool
from .space import ParameterSpace, clamp
from .stopping import StopCriterion
from .utils.random import RandomSource
from .utils.validation import check_positive_int, check_probability


@dataclass(frozen=True)
class Nsga2Config:
    population_size: int = 24
    p_c: float = 0.9
    p_m: float = 0.023

    def __post_init__(self):
        check_positive_int(self.population_size, "population_size", minimum=2)
        if self.population_size % 2:
            raise ValueError("population_size must be even")
        check_probability(self.p_c, "p_c")
        check_probability(self.p_m, "p_m")


def rank_and_crowd(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Front index and within-front crowding distance for every row of ``F``."""
    ranks = nondominated_ranks(F)
    crowd = np.zeros(len(F))
    for r in np.unique(ranks):
        idx = np.flatnonzero(ranks == r)
        crowd[idx] = crowding_distances(F[idx])
    return ranks, crowd


def _tournament(ranks, crowd, rng: RandomSource) -> int:
    a, b = rng.distinct_pair(len(ranks))
    if ranks[b] < ranks[a]:
        return b
    if ranks[b] == ranks[a] and crowd[b] > crowd[a]:
        return b
    return a


def binary_tournament_select(pop, rng: RandomSource) -> EvaluatedSolution:
    """Lower rank wins, then larger crowding, then the first drawn."""
    if len(pop) < 2:
        raise ValueError("binary tournament needs at least two individuals")
    ranks = np.array([s.rank for s in pop])
    crowd = np.array([s.crowding for s in pop])
    return pop[_tournament(ranks, crowd, rng)]


def arithmetic_recombination(p, q, sigma: float, space: ParameterSpace | None = None):
    """Whole arithmetic crossover with weight ``sigma``.

    Children are projected onto ``space`` (integer rounding + bounds) when given.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    c1 = sigma * p + (1.0 - sigma) * q
    c2 = (1.0 - sigma) * p + sigma * q
    if space is not None:
        c1, c2 = clamp(space, c1), clamp(space, c2)
    return c1, c2


def survival(F: np.ndarray, n: int) -> np.ndarray:
    """Indices of the ``n`` survivors ordered by (rank, -crowding, index)."""
    ranks, crowd = rank_and_crowd(F)
    order = np.lexsort((np.arange(len(F)), -crowd, ranks))
    return order[:n]


def _make_offspring(config: Nsga2Config, space, X, ranks, crowd, rng) -> np.ndarray:
    children = []
    for _ in range(config.population_size // 2):
        p = X[_tournament(ranks, crowd, rng)]
        q = X[_tournament(ranks, crowd, rng)]
        if rng.random() < config.p_c:
            c1, c2 = arithmetic_recombination(p, q, rng.random(), space)
        else:
            c1, c2 = p.copy(), q.copy()
        children.append(uniform_mutation(space, c1, config.p_m, rng))
        children.append(uniform_mutation(space, c2, config.p_m, rng))
    return np.array(children)


def _first_front(X, F, M, ranks) -> list[EvaluatedSolution]:
    return [
        EvaluatedSolution(X[i], F[i], 0, 0.0, M[i])
        for i in np.flatnonzero(ranks == 0)
    ]


def nsga2_run(
    config: Nsga2Config,
    space: ParameterSpace,
    evaluator,
    stop: StopCriterion,
    rng: RandomSource,
    pool: WorkerPool | None = None,
    objective_bounds=None,
    callback=None,
) -> RunResult:
    own_pool = pool is None
    pool = pool or WorkerPool(1)
    recorder = Recorder(stop, objective_bounds, callback)
    n = config.population_size
    try:
        X = stratified_init(space, n, rng)
        F, M = evaluate_genomes(pool, evaluator, X)
        evaluations = n
        ranks, crowd = rank_and_crowd(F)
        generation = 0
        done = recorder.record(0, _first_front(X, F, M, ranks), evaluations)
        while not done:
            generation += 1
            Q = _make_offspring(config, space, X, ranks, crowd, rng)
            FQ, MQ = evaluate_genomes(pool, evaluator, Q)
            evaluations += len(Q)
            XR = np.vstack([X, Q])
            FR = np.vstack([F, FQ])
            MR = list(M) + list(MQ)
            keep = survival(FR, n)
            X, F = XR[keep], FR[keep]
            M = [MR[i] for i in keep]
            ranks, crowd = rank_and_crowd(F)
            done = recorder.record(generation, _first_front(X, F, M, ranks), evaluations)
    finally:
        if own_pool:
            pool.close()

    archive = ParetoArchive(n)
    for s in _first_front(X, F, M, ranks):
        archive.insert(s)
    return RunResult(
        archive,
        recorder.history,
        generation,
        evaluations,
        recorder.elapsed,
        population=X,
        pool_stats=pool.stats(),
    )


class NSGA2(BaseOptimizer):
    """Parallel NSGA-II as an estimator.

    Parameters
    ----------
    population_size : int, default=24
    crossover_prob : float, default=0.9
    mutation_prob : float, default=0.023
        Per-component probability of the uniform mutation.
    max_generations : int, default=450
    hv_threshold : float or None, default=None
        Stop as soon as the front's normalised hypervolume reaches this value.
    reference : ReferenceFront or None
        Normalisation for the hypervolume; the problem's nominal bounds are
        used when absent.
    workers : int, default=1
    executor : {"thread", "process"}, default="thread"
    random_state : int or None
    stop : StopCriterion or None
        Overrides ``max_generations``/``hv_threshold``/``reference``.
    """

    def __init__(
        self,
        population_size=24,
        crossover_prob=0.9,
        mutation_prob=0.023,
        max_generations=450,
        hv_threshold=None,
        reference=None,
        workers=1,
        executor="thread",
        random_state=None,
        stop=None,
    ):
        self.population_size = population_size
        self.crossover_prob = crossover_prob
        self.mutation_prob = mutation_prob
        self.max_generations = max_generations
        self.hv_threshold = hv_threshold
        self.reference = reference
        self.workers = workers
        self.executor = executor
        self.random_state = random_state
        self.stop = stop

    def _run(self, problem: Problem, stop, rng, pool, callback):
        config = Nsga2Config(self.population_size, self.crossover_prob, self.mutation_prob)
        return nsga2_run(
            config, problem.space, problem.evaluator, stop, rng, pool,
            problem.objective_bounds, callback,
        )
