"""Master-slave batch evaluation over a persistent worker pool.

The master hands out ``(index, genome)`` tasks; any idle worker pulls the
next pending one. Results are written back by index and the call blocks
until the whole batch is done, so callers never see a partial batch and the
search trajectory does not depend on the number of workers.
"""

from __future__ import annotations

import os
import threading
import time
import traceback
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple, Sequence

import numpy as np


class Evaluation(NamedTuple):
    objectives: tuple
    metrics: dict | None = None


class BatchEvaluationError(RuntimeError):
    def __init__(self, index: int, genome, message: str):
        self.index = index
        self.genome = np.asarray(genome).tolist()
        self.message = message
        super().__init__(f"evaluation {index} failed for genome {self.genome}: {message}")


@dataclass
class EvaluationBatch:
    genomes: np.ndarray
    results: list
    metrics: list
    errors: dict = field(default_factory=dict)
    wall_seconds: float = 0.0

    @property
    def objectives(self) -> np.ndarray:
        return np.array(self.results, dtype=float)

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_for_errors(self) -> None:
        if self.errors:
            i = min(self.errors)
            raise BatchEvaluationError(i, self.genomes[i], self.errors[i])


def _worker_identity() -> tuple[int, int]:
    return os.getpid(), threading.get_ident()


def _evaluate_task(evaluator: Callable, index: int, genome: np.ndarray):
    """Runs inside a worker. Never raises: errors travel back with the index."""
    try:
        out = evaluator(genome)
        if isinstance(out, Evaluation):
            objectives, metrics = out
        else:
            objectives, metrics = out, None
        objectives = tuple(float(v) for v in objectives)
        if not all(np.isfinite(objectives)):
            raise ValueError(f"non-finite objectives {objectives}")
        return index, objectives, metrics, None, _worker_identity()
    except Exception as exc:  # noqa: BLE001 - reported per index
        msg = f"{type(exc).__name__}: {exc}\n{traceback.format_exc(limit=3)}"
        return index, None, None, msg, _worker_identity()


class WorkerPool:
    """Fixed-size pool of evaluation workers.

    Parameters
    ----------
    workers : int
        Number of concurrent evaluation lanes ``m``.
    kind : {"thread", "process"}
        Threads suit I/O-bound or GIL-releasing evaluators; processes suit
        pure-Python simulators. Process evaluators must be picklable.
    reuse : bool
        Keep the executor alive between batches. When False a fresh executor
        is built for every batch.
    """

    def __init__(self, workers: int = 1, kind: str = "thread", reuse: bool = True):
        if int(workers) < 1:
            raise ValueError("worker pool needs at least one worker")
        if kind not in ("thread", "process"):
            raise ValueError(f"unknown worker kind {kind!r}")
        self.workers = int(workers)
        self.kind = kind
        self.reuse = reuse
        self._executor = None
        self.executors_created = 0
        self.evaluations = 0
        self.batch_seconds: list[float] = []
        self.worker_ids: set = set()

    def _new_executor(self):
        self.executors_created += 1
        if self.kind == "thread":
            return ThreadPoolExecutor(max_workers=self.workers, thread_name_prefix="slave")
        return ProcessPoolExecutor(max_workers=self.workers)

    def _get_executor(self):
        if not self.reuse:
            return self._new_executor()
        if self._executor is None:
            self._executor = self._new_executor()
        return self._executor

    @property
    def workers_seen(self) -> int:
        """Distinct worker lanes that have executed at least one task."""
        return len(self.worker_ids)

    def map(self, evaluator: Callable, genomes: Sequence) -> EvaluationBatch:
        genomes = np.asarray(genomes, dtype=float)
        n = len(genomes)
        results: list[Any] = [None] * n
        metrics: list[Any] = [None] * n
        errors: dict[int, str] = {}
        t0 = time.perf_counter()
        if n:
            executor = self._get_executor()
            try:
                futures = [
                    executor.submit(_evaluate_task, evaluator, i, genomes[i])
                    for i in range(n)
                ]
                wait(futures)
                for slot, fut in enumerate(futures):
                    try:
                        i, obj, met, err, wid = fut.result()
                    except Exception as exc:  # worker crashed or unpicklable task
                        i = slot
                        obj, met, err, wid = None, None, f"{type(exc).__name__}: {exc}", None
                    results[i], metrics[i] = obj, met
                    if err is not None:
                        errors[i] = err
                    if wid is not None:
                        self.worker_ids.add(wid)
            finally:
                if not self.reuse:
                    executor.shutdown(wait=True)
        elapsed = time.perf_counter() - t0
        self.evaluations += n
        self.batch_seconds.append(elapsed)
        return EvaluationBatch(genomes, results, metrics, errors, elapsed)

    def close(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def stats(self) -> dict:
        return {
            "workers": self.workers,
            "kind": self.kind,
            "evaluations": self.evaluations,
            "batches": len(self.batch_seconds),
            "batch_seconds": list(self.batch_seconds),
            "executors_created": self.executors_created,
            "workers_seen": self.workers_seen,
        }


def evaluate_batch(pool: WorkerPool, evaluator: Callable, genomes: Sequence) -> EvaluationBatch:
    """Evaluate ``genomes`` on ``pool``; blocks until every result is back."""
    return pool.map(evaluator, genomes)


def measure_efficiency(times_parallel, times_sequential, m: int) -> tuple[float, float]:
    """Speedup ``mean(T_1) / mean(T_m)`` and efficiency ``speedup / m``."""
    tp = np.asarray(times_parallel, dtype=float)
    ts = np.asarray(times_sequential, dtype=float)
    if tp.size == 0 or ts.size == 0:
        raise ValueError("both timing samples must be non-empty")
    if int(m) < 1:
        raise ValueError("m must be >= 1")
    mean_p = tp.mean()
    if mean_p <= 0:
        raise ValueError("mean parallel time must be positive")
    speedup = ts.mean() / mean_p
    return float(speedup), float(speedup / m)


class SleepEvaluator:
    """Synthetic evaluator that sleeps ``delay`` seconds then returns the genome's first two entries."""

    def __init__(self, delay: float = 0.1):
        self.delay = delay

    def __call__(self, genome):
        time.sleep(self.delay)
        g = np.asarray(genome, dtype=float)
        return (float(g[0]), float(g[1 % len(g)]))


def benchmark_pool(workers: int, delay: float = 0.1, batch: int = 24, repeats: int = 10,
                   kind: str = "thread") -> list[float]:
    """Wall time of ``repeats`` batches of the synthetic evaluator on ``workers`` lanes."""
    genomes = np.tile(np.arange(batch, dtype=float)[:, None], (1, 2))
    evaluator = SleepEvaluator(delay)
    with WorkerPool(workers, kind=kind) as pool:
        return [pool.map(evaluator, genomes).wall_seconds for _ in range(repeats)]
