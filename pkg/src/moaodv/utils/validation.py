"""Input validation helpers, in the spirit of ``sklearn.utils.validation``."""

from __future__ import annotations

import numbers

import numpy as np

from ..space import ParameterSpace, validate_genome
from .random import RandomSource


class NotFittedError(ValueError, AttributeError):
    """Raised when a fitted attribute is accessed before ``fit``."""


def check_random_state(seed) -> RandomSource:
    if isinstance(seed, RandomSource):
        return seed
    if seed is None or isinstance(seed, (numbers.Integral, np.integer)):
        return RandomSource(seed)
    raise ValueError(f"{seed!r} cannot be used to seed a RandomSource")


def check_genome(space: ParameterSpace, g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if not validate_genome(space, g):
        raise ValueError(f"genome violates the parameter space: {g.tolist()}")
    return g


def check_objectives(F, n_objectives: int = 2) -> np.ndarray:
    """2-D finite float array with ``n_objectives`` columns."""
    F = np.asarray(F, dtype=float)
    if F.ndim == 1:
        F = F.reshape(1, -1) if F.size else F.reshape(0, n_objectives)
    if F.ndim != 2 or F.shape[1] != n_objectives:
        raise ValueError(f"expected shape (n, {n_objectives}), got {F.shape}")
    if not np.all(np.isfinite(F)):
        raise ValueError("objective values must be finite")
    return F


def check_probability(p, name: str) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return p


def check_positive_int(n, name: str, minimum: int = 1) -> int:
    if not isinstance(n, (numbers.Integral, np.integer)) or n < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {n!r}")
    return int(n)


def check_is_fitted(estimator, attributes=("front_",)):
    if not all(hasattr(estimator, a) for a in attributes):
        raise NotFittedError(
            f"This {type(estimator).__name__} instance is not fitted yet; call 'fit' first."
        )
