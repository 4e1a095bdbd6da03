"""ZDT1 benchmark backend with a known convex front."""

from __future__ import annotations

import numpy as np

from ..base import Problem
from ..space import ParameterSpace

ZDT1_BOUNDS = ((0.0, 1.0), (0.0, 1.0))


def zdt1_eval(x) -> tuple[float, float]:
    """``f1 = x1``, ``g = 1 + 9 * sum(x2..xn) / (n - 1)``, ``f2 = g * (1 - sqrt(f1 / g))``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("ZDT1 needs a vector with at least two components")
    if np.any(x < 0) or np.any(x > 1):
        raise ValueError("ZDT1 components must lie in [0, 1]")
    f1 = float(x[0])
    g = 1.0 + 9.0 * float(np.sum(x[1:])) / (x.size - 1)
    return f1, g * (1.0 - np.sqrt(f1 / g))


class Zdt1Evaluator:
    def __call__(self, genome):
        return zdt1_eval(genome)


def zdt1_true_front(n_points: int = 1000) -> np.ndarray:
    f1 = np.linspace(0.0, 1.0, n_points)
    return np.column_stack([f1, 1.0 - np.sqrt(f1)])


def zdt1_problem(n_var: int = 30) -> Problem:
    return Problem(ParameterSpace.box(n_var), Zdt1Evaluator(), ZDT1_BOUNDS, "zdt1")
