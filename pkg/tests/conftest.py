import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from moaodv.space import AODV_SPACE

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], max_examples=100
)
settings.load_profile("default")

RFC = np.array([1.0, 3.0, 6.0, 0.04, 10.0, 35, 2, 2, 1, 2, 7])
TUNED_NSGA2 = np.array([10.46, 10.55, 20.42, 6.89, 41.13, 21, 6, 6, 7, 3, 19])


@pytest.fixture
def space():
    return AODV_SPACE


def random_genomes(n, seed=0):
    """Valid AODV genomes drawn uniformly from the box."""
    from moaodv.space import clamp

    rng = np.random.default_rng(seed)
    X = AODV_SPACE.lower + rng.random((n, len(AODV_SPACE))) * AODV_SPACE.width
    return clamp(AODV_SPACE, X)


# acceptance criteria report -------------------------------------------------

CRITERIA: dict[tuple, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[n])
