import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moaodv import SMPSO, SmpsoConfig, StopCriterion, WorkerPool, smpso_run
from moaodv.core import EvaluatedSolution, ParetoArchive, dominates
from moaodv.fitness import zdt1_problem
from moaodv.smpso import (
    Particle,
    constriction_coefficient,
    position_update,
    select_leader,
    speed_limits,
    update_personal_best,
    velocity_update,
)
from moaodv.space import AODV_SPACE, validate_genome
from moaodv.utils.random import RandomSource

from conftest import TUNED_NSGA2, random_genomes


def test_constriction_examples():
    assert constriction_coefficient(1.5, 1.5) == 1.0
    assert constriction_coefficient(2.05, 2.05) == pytest.approx(0.7298, abs=1e-4)
    assert constriction_coefficient(4.0, 0.0) == 1.0
    phi = 4.1
    assert constriction_coefficient(2.05, 2.05) == pytest.approx(2 / abs(2 - phi - math.sqrt(phi**2 - 4 * phi)))


def test_velocity_examples():
    x = TUNED_NSGA2
    v = velocity_update(x, np.zeros(11), x, x, 0.1, 2.0, 2.0, 0.3, 0.7, AODV_SPACE)
    np.testing.assert_array_equal(v, 0)
    v = velocity_update(x, np.full(11, 3.0), x, x, 1.0, 0.0, 0.0, 0.5, 0.5, AODV_SPACE)
    assert v[0] == 3.0
    # chi = 1 for c1 + c2 <= 4; raw update of 12 on HELLO_INTERVAL hits delta = 9.5
    leader = x.copy()
    leader[0] = x[0] + 12.0 / (2.0 * 1.0)
    v = velocity_update(x, np.zeros(11), x, leader, 0.0, 2.0, 2.0, 1.0, 1.0, AODV_SPACE)
    assert v[0] == 9.5
    np.testing.assert_array_equal(speed_limits(AODV_SPACE)[:2], [9.5, 9.5])


def test_position_examples():
    x = TUNED_NSGA2.copy()
    x[0] = 10.0
    v = np.zeros(11)
    v[0] = 2.0
    nx, nv = position_update(x, v, AODV_SPACE)
    assert nx[0] == 12.0 and nv[0] == 2.0
    x[0], v[0] = 19.0, 5.0
    nx, nv = position_update(x, v, AODV_SPACE)
    assert nx[0] == 20.0 and nv[0] == pytest.approx(-0.005)
    nx, nv = position_update(TUNED_NSGA2, np.zeros(11), AODV_SPACE)
    np.testing.assert_array_equal(nx, TUNED_NSGA2)


@given(st.integers(0, 2**32))
def test_update_closure_and_speed_bound(seed):
    rng = RandomSource(seed)
    x, pb, lead = random_genomes(3, seed % 10_000)
    v = rng.uniform(-50, 50, 11)
    c1, c2 = rng.uniform(1.5, 2.5), rng.uniform(1.5, 2.5)
    v = velocity_update(x, v, pb, lead, 0.1, c1, c2, rng.random(), rng.random(), AODV_SPACE)
    assert np.all(np.abs(v) <= speed_limits(AODV_SPACE))
    nx, nv = position_update(x, v, AODV_SPACE)
    assert validate_genome(AODV_SPACE, nx)
    assert np.all(np.abs(nv) <= speed_limits(AODV_SPACE))


def test_leader_prefers_crowding():
    arch = ParetoArchive(5)
    for p in [(0, 1), (0.4, 0.6), (0.5, 0.5), (1, 0)]:
        arch.insert(EvaluatedSolution(np.zeros(1), p))
    arch.update_crowding()
    m = arch.members

    class Pairs(RandomSource):
        def __init__(self, pair):
            super().__init__(0)
            self.pair = pair

        def distinct_pair(self, n):
            return self.pair

    # (0.4,0.6) is more crowded than (0.5,0.5); the boundary members are infinite
    assert m[1].crowding < m[2].crowding
    assert select_leader(arch, Pairs((1, 2))) is m[2]
    assert select_leader(arch, Pairs((2, 1))) is m[2]
    assert select_leader(arch, Pairs((0, 3))) is m[0]
    rng = RandomSource(0)
    for _ in range(20):
        leader = select_leader(arch, rng)
        assert any(leader is x for x in m)


def test_personal_best_rules():
    def sol(p):
        return EvaluatedSolution(np.zeros(1), p)

    rng = RandomSource(0)
    p = Particle(np.zeros(1), np.zeros(1), sol((1, 1)), sol((0, 0)))
    update_personal_best(p, rng)
    assert tuple(p.best.objectives) == (0, 0)
    p = Particle(np.zeros(1), np.zeros(1), sol((0, 0)), sol((1, 1)))
    update_personal_best(p, rng)
    assert tuple(p.best.objectives) == (0, 0)
    outcomes = set()
    for seed in range(40):
        p = Particle(np.zeros(1), np.zeros(1), sol((0, 1)), sol((1, 0)))
        update_personal_best(p, RandomSource(seed))
        outcomes.add(tuple(p.best.objectives))
    assert outcomes == {(0, 1), (1, 0)}


def _run(seed, workers=1, gens=5, n=10, cap=6):
    prob = zdt1_problem(6)
    with WorkerPool(workers) as pool:
        return smpso_run(SmpsoConfig(n, cap, 1 / 6), prob.space, prob.evaluator,
                         StopCriterion(gens), RandomSource(seed), pool, prob.objective_bounds)


def test_zero_generations_is_initial_archive():
    res = _run(1, gens=0)
    assert res.generations_used == 0 and res.evaluations == 10
    assert 1 <= len(res.archive) <= 6


def test_archive_bounded_and_nondominated():
    res = _run(2, gens=10)
    for h in res.history:
        assert len(h.front) <= 6
        for i in range(len(h.front)):
            for j in range(len(h.front)):
                assert not dominates(h.front[i], h.front[j])
    assert np.all(np.diff([h.running_hypervolume for h in res.history]) >= 0)


def test_worker_invariance():
    a, b = _run(4), _run(4, workers=3)
    for x, y in zip(a.history, b.history):
        np.testing.assert_array_equal(x.front, y.front)
        np.testing.assert_array_equal(x.genomes, y.genomes)


def test_estimator_defaults():
    est = SMPSO()
    assert est.swarm_size == 24 and est.mutation_prob == 0.091 and est.inertia == 0.1
    est.set_params(swarm_size=8, max_generations=2, random_state=3).fit(zdt1_problem(4))
    assert est.n_evaluations_ == 24
    assert len(est.front_) <= 8
