"""Parallel multi-objective tuning of AODV routing parameters."""

from .core import ParetoArchive, EvaluatedSolution, dominates, fast_nondominated_sort
from .nsga2 import NSGA2, nsga2_run, Nsga2Config
from .smpso import SMPSO, smpso_run, SmpsoConfig
from .space import AODV_SPACE, ParameterSpace, ParameterSpec, clamp, validate_genome
from .stopping import StopCriterion
from .base import Problem
from .parallel import WorkerPool, evaluate_batch, measure_efficiency

__version__ = "0.1.0"

__all__ = [
    "AODV_SPACE",
    "EvaluatedSolution",
    "NSGA2",
    "Nsga2Config",
    "ParameterSpace",
    "ParameterSpec",
    "ParetoArchive",
    "Problem",
    "SMPSO",
    "SmpsoConfig",
    "StopCriterion",
    "WorkerPool",
    "clamp",
    "dominates",
    "evaluate_batch",
    "fast_nondominated_sort",
    "measure_efficiency",
    "nsga2_run",
    "smpso_run",
    "validate_genome",
]
