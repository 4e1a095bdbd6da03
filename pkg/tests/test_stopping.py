import numpy as np
import pytest

from moaodv import NSGA2, SMPSO, StopCriterion
from moaodv.fitness import zdt1_problem
from moaodv.indicators import ReferenceFront


class Scripted:
    """Indicator yielding ``values[g - 1]`` at generation ``g >= 1``.

    The initial population (generation 0) scores 0; the last value repeats.
    """

    def __init__(self, values):
        self.values = list(values)
        self.calls = 0

    def __call__(self, F):
        g = self.calls
        self.calls += 1
        if g == 0:
            return 0.0
        return self.values[min(g - 1, len(self.values) - 1)]


@pytest.mark.parametrize("engine", [NSGA2, SMPSO])
@pytest.mark.parametrize("threshold,expected", [(0.785, 2), (0.70, 1), (0.90, 3), (0.95, 12)])
def test_mocked_indicator_sequence(engine, threshold, expected):
    stop = StopCriterion(12, threshold, indicator=Scripted([0.70, 0.785, 0.90]))
    est = engine(population_size=4, random_state=0, stop=stop) if engine is NSGA2 \
        else engine(swarm_size=4, random_state=0, stop=stop)
    est.fit(zdt1_problem(4))
    assert est.n_generations_ == expected
    assert [h.generation for h in est.history_] == list(range(expected + 1))


def test_should_stop_rule():
    s = StopCriterion(10, 0.785)
    assert not s.should_stop(0, 0.99)
    assert not s.should_stop(1, 0.7849)
    assert s.should_stop(1, 0.785)
    assert s.should_stop(10, 0.0)
    assert StopCriterion(0).should_stop(0, float("nan"))
    assert StopCriterion(5, 0.0).should_stop(1, 0.0)


def test_needs_a_condition():
    with pytest.raises(ValueError):
        StopCriterion(None, None)
    with pytest.raises(ValueError):
        StopCriterion(-1)


def test_hypervolume_fallbacks():
    F = np.array([[0.5, 0.5]])
    assert np.isnan(StopCriterion(3).hypervolume(F))
    assert StopCriterion(3).hypervolume(F, ((0, 1), (0, 1))) == pytest.approx(0.25)
    ref = ReferenceFront(np.empty((0, 2)), ((0, 2), (0, 2)))
    assert StopCriterion(3, reference=ref).hypervolume(F) == pytest.approx(0.5625)
