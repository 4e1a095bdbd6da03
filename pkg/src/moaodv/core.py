"""Shared evolutionary machinery used by both engines.

Objective vectors are minimised. Population-level routines work on plain
``(n, m)`` float arrays; :class:`EvaluatedSolution` is the per-individual
record handed back to callers and stored in the leaders archive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .space import ParameterSpace, clamp
from .utils.random import RandomSource


@dataclass
class EvaluatedSolution:
    genome: np.ndarray
    objectives: np.ndarray
    rank: int = 0
    crowding: float = 0.0
    metrics: dict | None = None

    def __post_init__(self):
        self.genome = np.asarray(self.genome, dtype=float)
        self.objectives = np.asarray(self.objectives, dtype=float)

    def copy(self) -> "EvaluatedSolution":
        return EvaluatedSolution(
            self.genome.copy(),
            self.objectives.copy(),
            self.rank,
            self.crowding,
            None if self.metrics is None else dict(self.metrics),
        )


def dominates(a, b) -> bool:
    """Pareto dominance for minimisation."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return bool(np.all(a <= b) and np.any(a < b))


def dominance_matrix(F: np.ndarray) -> np.ndarray:
    """``D[i, j]`` is True when row ``i`` dominates row ``j``."""
    F = np.asarray(F, dtype=float)
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    return le & lt


def nondominated_ranks(F: np.ndarray) -> np.ndarray:
    """Front index of every row of ``F`` (0 = non-dominated)."""
    F = np.asarray(F, dtype=float)
    n = F.shape[0]
    ranks = np.full(n, -1, dtype=int)
    if n == 0:
        return ranks
    D = dominance_matrix(F)
    dominated_by = D.sum(axis=0)
    current = np.flatnonzero(dominated_by == 0)
    rank = 0
    while current.size:
        ranks[current] = rank
        dominated_by = dominated_by - D[current].sum(axis=0)
        dominated_by[ranks >= 0] = -1
        current = np.flatnonzero(dominated_by == 0)
        rank += 1
    return ranks


def fast_nondominated_sort(pop: Sequence[EvaluatedSolution]) -> list[list[EvaluatedSolution]]:
    """Partition ``pop`` into fronts and set each member's ``rank``."""
    if not pop:
        return []
    ranks = nondominated_ranks(np.array([s.objectives for s in pop]))
    fronts: list[list[EvaluatedSolution]] = [[] for _ in range(ranks.max() + 1)]
    for s, r in zip(pop, ranks):
        s.rank = int(r)
        fronts[r].append(s)
    return fronts


def crowding_distances(F: np.ndarray) -> np.ndarray:
    """Crowding distance of every row of a (mutually non-dominated) front."""
    F = np.asarray(F, dtype=float)
    n, m = F.shape if F.ndim == 2 else (0, 0)
    d = np.zeros(n)
    if n == 0:
        return d
    if n <= 2:
        d[:] = np.inf
        return d
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        col = F[order, j]
        span = col[-1] - col[0]
        if span > 0:
            d[order[1:-1]] += (col[2:] - col[:-2]) / span
        d[order[0]] = np.inf
        d[order[-1]] = np.inf
    return d


def crowding_distance(front: Sequence[EvaluatedSolution]) -> None:
    """Assign ``crowding`` to each member of ``front`` in place."""
    if not front:
        return
    dist = crowding_distances(np.array([s.objectives for s in front]))
    for s, c in zip(front, dist):
        s.crowding = float(c)


def nondominated(F: np.ndarray) -> np.ndarray:
    """Boolean mask of non-dominated rows; only the first of equal rows is kept."""
    F = np.asarray(F, dtype=float)
    if F.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    mask = ~dominance_matrix(F).any(axis=0)
    _, first = np.unique(F, axis=0, return_index=True)
    unique = np.zeros(F.shape[0], dtype=bool)
    unique[first] = True
    return mask & unique


class ParetoArchive:
    """Bounded set of mutually non-dominated solutions.

    Members are kept in insertion order; on overflow the member with the
    smallest crowding distance is evicted, the earliest-inserted on ties.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("archive capacity must be >= 1")
        self.capacity = int(capacity)
        self.members: list[EvaluatedSolution] = []

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def objectives(self) -> np.ndarray:
        if not self.members:
            return np.empty((0, 2))
        return np.array([s.objectives for s in self.members])

    @property
    def genomes(self) -> np.ndarray:
        return np.array([s.genome for s in self.members])

    def insert(self, s: EvaluatedSolution) -> bool:
        f = s.objectives
        if self.members:
            F = self.objectives
            if np.any(np.all(F <= f, axis=1)):
                # dominated by, or equal to, an existing member
                return False
            beaten = np.all(f <= F, axis=1) & np.any(f < F, axis=1)
            if beaten.any():
                self.members = [m for m, b in zip(self.members, beaten) if not b]
        self.members.append(s)
        if len(self.members) > self.capacity:
            self.update_crowding()
            worst = int(np.argmin([m.crowding for m in self.members]))
            del self.members[worst]
        return True

    def update_crowding(self) -> None:
        crowding_distance(self.members)

    def sorted(self) -> list[EvaluatedSolution]:
        """Members sorted ascending by the first objective."""
        return sorted(self.members, key=lambda m: tuple(m.objectives))


def stratified_init(space: ParameterSpace, solset_size: int, rng: RandomSource) -> np.ndarray:
    """Place genome ``k`` in the ``k``-th diagonal slice of the search box.

    Every component of genome ``k`` is ``lower + (k + u_k) / n * width`` with
    a single offset ``u_k ~ U[0, 1)`` shared across components.
    """
    if solset_size < 1:
        raise ValueError("solset_size must be >= 1")
    u = rng.random(solset_size)
    frac = (np.arange(solset_size) + u) / solset_size
    X = space.lower + frac[:, None] * space.width
    return clamp(space, X)


def apply_mutation(space: ParameterSpace, g, mask, beta) -> np.ndarray:
    """Move the masked components by ``beta * width`` and project back."""
    g = np.asarray(g, dtype=float)
    moved = np.where(mask, g + np.asarray(beta) * space.width, g)
    return clamp(space, moved)


def uniform_mutation(space: ParameterSpace, g, p_m: float, rng: RandomSource) -> np.ndarray:
    """Per-component uniform mutation with ``beta ~ U[-0.5, 0.5]``.

    Unmutated components are returned untouched, so ``p_m = 0`` is the identity.
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[-1]
    mask = rng.random(n) < p_m
    beta = rng.uniform(-0.5, 0.5, n)
    if not mask.any():
        return g.copy()
    return apply_mutation(space, g, mask, beta)
