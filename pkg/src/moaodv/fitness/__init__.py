from .fixtures import REFERENCE_CONFIGS, RFC_DEFAULTS, TUNED_NSGA2, TUNED_SMPSO
from .scenario import (
    Flow,
    ScenarioConfig,
    ScenarioError,
    chain_scenario,
    default_scenario,
    generate_scenario,
    load_scenario,
    save_scenario,
    two_node_scenario,
    validation_scenarios,
)
from .simulator import AodvParams, QosMetrics, simulate_vanet
from .vanet import VanetEvaluator, objectives_from_metrics, vanet_problem
from .zdt import Zdt1Evaluator, zdt1_eval, zdt1_problem, zdt1_true_front

__all__ = [
    "AodvParams",
    "Flow",
    "QosMetrics",
    "REFERENCE_CONFIGS",
    "RFC_DEFAULTS",
    "ScenarioConfig",
    "ScenarioError",
    "TUNED_NSGA2",
    "TUNED_SMPSO",
    "VanetEvaluator",
    "Zdt1Evaluator",
    "chain_scenario",
    "default_scenario",
    "generate_scenario",
    "load_scenario",
    "objectives_from_metrics",
    "save_scenario",
    "simulate_vanet",
    "two_node_scenario",
    "validation_scenarios",
    "vanet_problem",
    "zdt1_eval",
    "zdt1_problem",
    "zdt1_true_front",
]
