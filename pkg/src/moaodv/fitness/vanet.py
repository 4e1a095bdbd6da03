"""VANET fitness backend: genome -> (100 - PDR, E2ED in ms)."""

from __future__ import annotations

from ..base import Problem
from ..parallel import Evaluation
from ..space import AODV_SPACE
from .scenario import ScenarioConfig, default_scenario
from .simulator import QosMetrics, simulate_vanet


def objectives_from_metrics(m: QosMetrics) -> tuple[float, float]:
    """Both objectives are minimised: packet loss percentage and mean delay."""
    return 100.0 - m.pdr, m.e2ed


class VanetEvaluator:
    """Picklable evaluator that simulates one scenario per call."""

    def __init__(self, scenario: ScenarioConfig):
        scenario.validate()
        self.scenario = scenario

    def __call__(self, genome) -> Evaluation:
        m = simulate_vanet(self.scenario, genome)
        return Evaluation(objectives_from_metrics(m), m.as_dict())


def vanet_problem(scenario: ScenarioConfig | None = None) -> Problem:
    """AODV tuning problem. Delay is bounded by the simulated duration."""
    scenario = scenario or default_scenario(duration=60.0)
    bounds = ((0.0, 100.0), (0.0, scenario.duration * 1000.0))
    return Problem(AODV_SPACE, VanetEvaluator(scenario), bounds, "vanet")
