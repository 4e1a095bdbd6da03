from .random import RandomSource, derive_seeds
from .validation import (
    NotFittedError,
    check_genome,
    check_is_fitted,
    check_objectives,
    check_positive_int,
    check_probability,
    check_random_state,
)

__all__ = [
    "RandomSource",
    "derive_seeds",
    "NotFittedError",
    "check_genome",
    "check_is_fitted",
    "check_objectives",
    "check_positive_int",
    "check_probability",
    "check_random_state",
]
