from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .indicators import ReferenceFront, front_hypervolume


@dataclass
class StopCriterion:
    """Halt on a hypervolume threshold (``>=``) or after ``max_generations``.

    The threshold is only consulted from generation 1 onwards, never on the
    initial population. ``indicator`` overrides how a front is scored, which
    is mostly useful for tests.
    """

    max_generations: int | None = 450
    hv_threshold: float | None = None
    reference: ReferenceFront | None = None
    indicator: Callable[[np.ndarray], float] | None = None

    def __post_init__(self):
        if self.max_generations is None and self.hv_threshold is None:
            raise ValueError("a stop criterion needs a threshold or a generation cap")
        if self.max_generations is not None and self.max_generations < 0:
            raise ValueError("max_generations must be >= 0")

    def hypervolume(self, F, default_bounds=None) -> float:
        if self.indicator is not None:
            return float(self.indicator(F))
        ref = self.reference
        if ref is None:
            if default_bounds is None:
                return float("nan")
            ref = ReferenceFront(np.empty((0, 2)), tuple(map(tuple, default_bounds)))
        return front_hypervolume(F, ref)

    def should_stop(self, generation: int, hypervolume: float) -> bool:
        if self.max_generations is not None and generation >= self.max_generations:
            return True
        if generation >= 1 and self.hv_threshold is not None:
            return bool(hypervolume >= self.hv_threshold)
        return False
