"""Master-slave SMPSO: speed-constrained multi-objective PSO."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .base import BaseOptimizer, Problem, Recorder, RunResult, evaluate_genomes
from .core import (
    EvaluatedSolution,
    ParetoArchive,
    dominates,
    stratified_init,
    uniform_mutation,
)
from .parallel import WorkerPool
from .space import ParameterSpace, round_half_up
from .stopping import StopCriterion
from .utils.random import RandomSource
from .utils.validation import check_positive_int, check_probability

BOUNCE_DAMPING = -0.001


@dataclass(frozen=True)
class SmpsoConfig:
    swarm_size: int = 24
    archive_capacity: int = 24
    p_m: float = 0.091
    c1_range: tuple = (1.5, 2.5)
    c2_range: tuple = (1.5, 2.5)
    w: float = 0.1

    def __post_init__(self):
        check_positive_int(self.swarm_size, "swarm_size")
        check_positive_int(self.archive_capacity, "archive_capacity")
        check_probability(self.p_m, "p_m")


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    best: EvaluatedSolution | None = None
    current: EvaluatedSolution | None = field(default=None, repr=False)


def constriction_coefficient(c1: float, c2: float) -> float:
    phi = c1 + c2
    if phi <= 4:
        phi = 0.0
    return 2.0 / abs(2.0 - phi - math.sqrt(phi * phi - 4.0 * phi))


def speed_limits(space: ParameterSpace) -> np.ndarray:
    return space.width / 2.0


def velocity_update(position, velocity, personal_best, leader, w, c1, c2, r1, r2,
                    space: ParameterSpace) -> np.ndarray:
    """Constricted velocity, clipped to half the width of each parameter range."""
    x = np.asarray(position, dtype=float)
    v = np.asarray(velocity, dtype=float)
    chi = constriction_coefficient(c1, c2)
    raw = chi * (
        w * v
        + c1 * r1 * (np.asarray(personal_best, dtype=float) - x)
        + c2 * r2 * (np.asarray(leader, dtype=float) - x)
    )
    delta = speed_limits(space)
    return np.clip(raw, -delta, delta)


def position_update(position, velocity, space: ParameterSpace) -> tuple[np.ndarray, np.ndarray]:
    """Move by ``velocity``; a component leaving its range is pinned to the
    bound and its velocity multiplied by -0.001. Integer components are
    rounded afterwards."""
    x = np.asarray(position, dtype=float) + velocity
    v = np.array(velocity, dtype=float)
    low = x < space.lower
    high = x > space.upper
    x[low] = space.lower[low]
    x[high] = space.upper[high]
    v[low | high] *= BOUNCE_DAMPING
    if space.integer_mask.any():
        x[space.integer_mask] = round_half_up(x[space.integer_mask])
    return x, v


def select_leader(archive: ParetoArchive, rng: RandomSource) -> EvaluatedSolution:
    """Binary tournament on crowding distance (larger wins, first drawn on ties)."""
    members = archive.members
    if len(members) == 1:
        return members[0]
    a, b = rng.distinct_pair(len(members))
    return members[b] if members[b].crowding > members[a].crowding else members[a]


def update_personal_best(particle: Particle, rng: RandomSource) -> None:
    new, old = particle.current, particle.best
    if dominates(new.objectives, old.objectives):
        particle.best = new
    elif dominates(old.objectives, new.objectives):
        return
    elif rng.random() < 0.5:
        particle.best = new


def smpso_run(
    config: SmpsoConfig,
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
    n = config.swarm_size
    archive = ParetoArchive(config.archive_capacity)
    try:
        X = stratified_init(space, n, rng)
        F, M = evaluate_genomes(pool, evaluator, X)
        evaluations = n
        swarm = []
        for i in range(n):
            sol = EvaluatedSolution(X[i], F[i], metrics=M[i])
            swarm.append(Particle(X[i].copy(), np.zeros(len(space)), sol, sol))
            archive.insert(sol.copy())
        generation = 0
        done = recorder.record(0, archive.members, evaluations)
        while not done:
            generation += 1
            archive.update_crowding()
            for p in swarm:
                leader = select_leader(archive, rng)
                c1 = rng.uniform(*config.c1_range)
                c2 = rng.uniform(*config.c2_range)
                r1, r2 = rng.random(), rng.random()
                p.velocity = velocity_update(
                    p.position, p.velocity, p.best.genome, leader.genome,
                    config.w, c1, c2, r1, r2, space,
                )
                p.position, p.velocity = position_update(p.position, p.velocity, space)
                p.position = uniform_mutation(space, p.position, config.p_m, rng)
            X = np.array([p.position for p in swarm])
            F, M = evaluate_genomes(pool, evaluator, X)
            evaluations += n
            for i, p in enumerate(swarm):
                p.current = EvaluatedSolution(X[i], F[i], metrics=M[i])
                update_personal_best(p, rng)
            for p in swarm:
                archive.insert(p.current.copy())
            done = recorder.record(generation, archive.members, evaluations)
    finally:
        if own_pool:
            pool.close()
    return RunResult(
        archive,
        recorder.history,
        generation,
        evaluations,
        recorder.elapsed,
        population=np.array([p.position for p in swarm]),
        pool_stats=pool.stats(),
    )


class SMPSO(BaseOptimizer):
    """Parallel SMPSO as an estimator.

    Parameters
    ----------
    swarm_size : int, default=24
    archive_capacity : int or None, default=None
        Leaders archive size; defaults to ``swarm_size``.
    mutation_prob : float, default=0.091
        Per-component probability of the turbulence (uniform) mutation.
    inertia : float, default=0.1
    c1_range, c2_range : tuple, default=(1.5, 2.5)
    max_generations, hv_threshold, reference, workers, executor, random_state, stop
        As in :class:`moaodv.nsga2.NSGA2`.
    """

    def __init__(
        self,
        swarm_size=24,
        archive_capacity=None,
        mutation_prob=0.091,
        inertia=0.1,
        c1_range=(1.5, 2.5),
        c2_range=(1.5, 2.5),
        max_generations=450,
        hv_threshold=None,
        reference=None,
        workers=1,
        executor="thread",
        random_state=None,
        stop=None,
    ):
        self.swarm_size = swarm_size
        self.archive_capacity = archive_capacity
        self.mutation_prob = mutation_prob
        self.inertia = inertia
        self.c1_range = c1_range
        self.c2_range = c2_range
        self.max_generations = max_generations
        self.hv_threshold = hv_threshold
        self.reference = reference
        self.workers = workers
        self.executor = executor
        self.random_state = random_state
        self.stop = stop

    def _run(self, problem: Problem, stop, rng, pool, callback):
        config = SmpsoConfig(
            self.swarm_size,
            self.archive_capacity or self.swarm_size,
            self.mutation_prob,
            tuple(self.c1_range),
            tuple(self.c2_range),
            self.inertia,
        )
        return smpso_run(
            config, problem.space, problem.evaluator, stop, rng, pool,
            problem.objective_bounds, callback,
        )
