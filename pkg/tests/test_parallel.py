import time

import numpy as np
import pytest

from moaodv.parallel import (
    BatchEvaluationError,
    Evaluation,
    SleepEvaluator,
    WorkerPool,
    benchmark_pool,
    evaluate_batch,
    measure_efficiency,
)


def tagged(g):
    # later indices finish first, so completion order is reversed
    time.sleep(0.01 * (5 - g[0]))
    return (g[0], g[0])


def failing(g):
    if g[0] == 2:
        raise RuntimeError("bad genome")
    return Evaluation((g[0], 0.0), {"tag": int(g[0])})


def square(g):
    return (float(g[0] ** 2), float(g[1]))


def test_results_index_aligned():
    G = np.arange(5, dtype=float)[:, None]
    with WorkerPool(5) as pool:
        batch = evaluate_batch(pool, tagged, G)
    assert batch.objectives.tolist() == [[i, i] for i in range(5)]
    assert batch.ok


@pytest.mark.parametrize("kind", ["thread", "process"])
def test_worker_count_does_not_change_results(kind):
    G = np.random.default_rng(0).random((13, 2))
    with WorkerPool(1, kind=kind) as p1, WorkerPool(4, kind=kind) as p4:
        a, b = p1.map(square, G), p4.map(square, G)
    np.testing.assert_array_equal(a.objectives, b.objectives)


def test_errors_reported_per_index():
    G = np.arange(4, dtype=float)[:, None]
    with WorkerPool(2) as pool:
        batch = pool.map(failing, G)
    assert set(batch.errors) == {2} and "bad genome" in batch.errors[2]
    assert batch.results[3] == (3.0, 0.0) and batch.metrics[3] == {"tag": 3}
    with pytest.raises(BatchEvaluationError) as err:
        batch.raise_for_errors()
    assert err.value.index == 2 and err.value.genome == [2.0]


def test_non_finite_objectives_are_errors():
    with WorkerPool(1) as pool:
        batch = pool.map(lambda g: (float("nan"), 0.0), np.zeros((1, 1)))
    assert 0 in batch.errors


def test_zero_workers_rejected():
    with pytest.raises(ValueError):
        WorkerPool(0)
    with pytest.raises(ValueError):
        WorkerPool(2, kind="gpu")


def test_pool_reuse_counters():
    G = np.zeros((8, 2))
    with WorkerPool(4) as pool:
        for _ in range(5):
            pool.map(SleepEvaluator(0.01), G)
        stats = pool.stats()
    assert stats["executors_created"] == 1
    assert stats["evaluations"] == 40 and stats["batches"] == 5
    assert 1 <= stats["workers_seen"] <= 4
    with WorkerPool(2, reuse=False) as pool:
        pool.map(square, G)
        pool.map(square, G)
        assert pool.stats()["executors_created"] == 2


def test_barrier_wall_time():
    with WorkerPool(8) as pool:
        batch = pool.map(SleepEvaluator(0.1), np.zeros((24, 2)))
    assert 0.3 <= batch.wall_seconds < 0.6


def test_measure_efficiency_examples():
    assert measure_efficiency([25.0], [100.0], 5) == pytest.approx((4.0, 0.8))
    s, e = measure_efficiency([1.0], [21.614], 24)
    assert e == pytest.approx(0.901, abs=5e-4)
    assert measure_efficiency([3.0, 3.0], [3.0], 1) == (1.0, 1.0)
    with pytest.raises(ValueError):
        measure_efficiency([0.0], [1.0], 2)
    with pytest.raises(ValueError):
        measure_efficiency([], [1.0], 2)


def test_benchmark_pool_shape():
    times = benchmark_pool(4, delay=0.01, batch=8, repeats=3)
    assert len(times) == 3 and all(t > 0.015 for t in times)
