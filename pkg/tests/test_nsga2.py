import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moaodv import NSGA2, Nsga2Config, StopCriterion, WorkerPool, nsga2_run
from moaodv.core import EvaluatedSolution, nondominated_ranks
from moaodv.fitness import zdt1_problem
from moaodv.nsga2 import arithmetic_recombination, binary_tournament_select, survival
from moaodv.space import AODV_SPACE, validate_genome
from moaodv.utils.random import RandomSource

from conftest import RFC, TUNED_NSGA2


class ScriptedRng(RandomSource):
    """Returns fixed index pairs from ``distinct_pair``."""

    def __init__(self, pairs):
        super().__init__(0)
        self.pairs = list(pairs)

    def distinct_pair(self, n):
        return self.pairs.pop(0)


def member(rank, crowding, tag):
    return EvaluatedSolution(np.array([tag]), np.array([tag, tag]), rank, crowding)


def test_tournament_examples():
    pop = [member(0, 1.0, 0), member(1, 5.0, 1)]
    assert binary_tournament_select(pop, ScriptedRng([(1, 0)])) is pop[0]
    pop = [member(0, np.inf, 0), member(0, 2.0, 1)]
    assert binary_tournament_select(pop, ScriptedRng([(1, 0)])) is pop[0]
    pop = [member(0, 2.0, 0), member(0, 2.0, 1)]
    assert binary_tournament_select(pop, ScriptedRng([(1, 0)])) is pop[1]
    with pytest.raises(ValueError):
        binary_tournament_select(pop[:1], RandomSource(0))


def test_recombination_examples():
    c1, c2 = arithmetic_recombination(RFC, TUNED_NSGA2, 1.0, AODV_SPACE)
    np.testing.assert_array_equal(c1, RFC)
    np.testing.assert_array_equal(c2, TUNED_NSGA2)
    c1, c2 = arithmetic_recombination([10.0], [20.0], 0.7)
    assert c1[0] == pytest.approx(13.0) and c2[0] == pytest.approx(17.0)
    c1, c2 = arithmetic_recombination(RFC, TUNED_NSGA2, 0.5)
    np.testing.assert_allclose(c1, (RFC + TUNED_NSGA2) / 2)
    np.testing.assert_allclose(c2, c1)


@given(st.floats(0, 1), st.integers(0, 2**32))
def test_recombination_closure(sigma, seed):
    from conftest import random_genomes

    p, q = random_genomes(2, seed % 10_000)
    for c in arithmetic_recombination(p, q, sigma, AODV_SPACE):
        assert validate_genome(AODV_SPACE, c)


def test_survival_prefers_rank_then_crowding():
    F = np.array([(0, 4), (1, 3), (2, 2), (3, 1), (4, 0), (5, 5), (6, 6)], float)
    keep = survival(F, 4)
    # first front has 5 members; the middle-crowding ones lose the tie to the
    # boundaries, the earliest index wins among equals
    assert set(keep.tolist()) <= set(range(5))
    assert {0, 4} <= set(keep.tolist())
    assert survival(F, 6).tolist()[-1] == 5


def test_config_validation():
    with pytest.raises(ValueError):
        Nsga2Config(population_size=5)
    with pytest.raises(ValueError):
        Nsga2Config(p_c=1.5)


def _run(seed, workers=1, gens=5, pop=12):
    prob = zdt1_problem(8)
    with WorkerPool(workers) as pool:
        return nsga2_run(Nsga2Config(pop, 0.9, 1 / 8), prob.space, prob.evaluator,
                         StopCriterion(gens), RandomSource(seed), pool, prob.objective_bounds)


def test_zero_generations_returns_initial_front():
    res = _run(3, gens=0)
    assert res.generations_used == 0 and res.evaluations == 12
    assert len(res.history) == 1
    F0 = res.history[0].front
    assert np.all(nondominated_ranks(F0) == 0)
    np.testing.assert_array_equal(res.front, F0)


def test_determinism_and_worker_invariance():
    a, b, c = _run(7), _run(7), _run(7, workers=4)
    for x, y in zip(a.history, b.history):
        np.testing.assert_array_equal(x.front, y.front)
    for x, y in zip(a.history, c.history):
        np.testing.assert_array_equal(x.front, y.front)
        np.testing.assert_array_equal(x.genomes, y.genomes)
    assert not np.array_equal(_run(8).front, a.front)


def test_population_invariants():
    res = _run(11, gens=8)
    assert res.population.shape == (12, 8)
    assert res.evaluations == 12 * 9
    assert [h.evaluations for h in res.history] == [12 * (g + 1) for g in range(9)]
    hv = [h.running_hypervolume for h in res.history]
    assert np.all(np.diff(hv) >= 0)


def test_vanet_population_valid():
    from moaodv.fitness import two_node_scenario, vanet_problem

    est = NSGA2(population_size=6, max_generations=2, random_state=1)
    est.fit(vanet_problem(two_node_scenario(duration=3)))
    assert all(validate_genome(AODV_SPACE, g) for g in est.result_.population)
    assert est.n_evaluations_ == 18


def test_estimator_api():
    est = NSGA2(population_size=10, max_generations=3, random_state=0, mutation_prob=0.1)
    assert est.get_params()["population_size"] == 10
    est.set_params(population_size=12)
    est.fit(zdt1_problem(5))
    assert est.front_.shape[1] == 2
    assert est.genomes_.shape == (len(est.front_), 5)
    assert est.n_generations_ == 3 and len(est.history_) == 4
    assert 0 <= est.score() <= 1
    assert est.run_metadata_["estimator"] == "NSGA2"


def test_unfitted_score_raises():
    from moaodv.utils.validation import NotFittedError

    with pytest.raises(NotFittedError):
        NSGA2().score()


def test_evaluator_failure_reports_genome():
    from moaodv.base import Problem
    from moaodv.parallel import BatchEvaluationError
    from moaodv.space import ParameterSpace

    def bad(g):
        if g[0] > 0.5:
            raise RuntimeError("boom")
        return (g[0], 1 - g[0])

    with pytest.raises(BatchEvaluationError) as err:
        NSGA2(population_size=4, max_generations=2, random_state=0).fit(
            Problem(ParameterSpace.box(2), bad, ((0, 1), (0, 1))))
    assert err.value.index >= 2 and "boom" in str(err.value)
