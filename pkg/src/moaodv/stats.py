"""Non-parametric tests for comparing optimizer runs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as _sps

EXACT_LIMIT = 20


@dataclass(frozen=True)
class WilcoxonResult:
    r_plus: float
    r_minus: float
    p_value: float
    n: int
    degenerate: bool = False

    def __iter__(self):
        return iter((self.r_plus, self.r_minus, self.p_value))


@dataclass(frozen=True)
class FriedmanResult:
    mean_ranks: np.ndarray
    statistic: float
    p_value: float

    def __iter__(self):
        return iter((self.mean_ranks, self.statistic, self.p_value))


def _exact_two_sided(doubled_ranks: np.ndarray, r_plus: float) -> float:
    """P(|R+ - E| >= |r_plus - E|) over all 2**n equally likely sign patterns.

    Ranks are doubled so average (half-integer) ranks stay integral; the
    null distribution is built with a subset-sum count.
    """
    ranks = [int(r) for r in doubled_ranks]
    total = sum(ranks)
    counts = [1] + [0] * total
    for r in ranks:
        for s in range(total, r - 1, -1):
            counts[s] += counts[s - r]
    centre = total / 2.0
    observed = abs(2.0 * r_plus - centre)
    hits = sum(c for s, c in enumerate(counts) if abs(s - centre) >= observed - 1e-9)
    return min(1.0, hits / 2 ** len(ranks))


def wilcoxon_signed_rank(a, b) -> WilcoxonResult:
    """Wilcoxon signed-rank test on paired samples ``a`` and ``b``.

    Zero differences are dropped and tied magnitudes get average ranks.
    ``R+`` sums the ranks of positive ``a - b``. The two-sided p-value is exact
    for up to 20 non-zero pairs, otherwise a normal approximation with
    continuity and tie correction.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise ValueError("paired samples must have equal length")
    d = a - b
    d = d[d != 0]
    n = len(d)
    if n == 0:
        return WilcoxonResult(0.0, 0.0, 1.0, 0, degenerate=True)
    ranks = _sps.rankdata(np.abs(d))
    r_plus = float(ranks[d > 0].sum())
    r_minus = float(ranks[d < 0].sum())
    if n <= EXACT_LIMIT:
        p = _exact_two_sided(np.rint(2 * ranks), r_plus)
    else:
        mean = n * (n + 1) / 4.0
        _, tie_counts = np.unique(ranks, return_counts=True)
        var = n * (n + 1) * (2 * n + 1) / 24.0 - np.sum(tie_counts**3 - tie_counts) / 48.0
        z = max(abs(r_plus - mean) - 0.5, 0.0) / math.sqrt(var)
        p = float(min(1.0, 2.0 * _sps.norm.sf(z)))
    return WilcoxonResult(r_plus, r_minus, p, n)


def friedman_rank(matrix) -> FriedmanResult:
    """Friedman test on an ``n blocks x k treatments`` matrix.

    Smaller values rank better (rank 1); callers flip signs for maximised
    measures. Ties share the average rank.
    """
    rows = [list(r) for r in matrix]
    if not rows or len({len(r) for r in rows}) != 1:
        raise ValueError("friedman_rank needs a rectangular matrix")
    M = np.asarray(rows, dtype=float)
    n, k = M.shape
    if n < 2 or k < 2:
        raise ValueError("friedman_rank needs at least 2 blocks and 2 treatments")
    R = np.apply_along_axis(_sps.rankdata, 1, M)
    mean_ranks = R.mean(axis=0)
    chi2 = 12.0 * n / (k * (k + 1)) * float(np.sum((mean_ranks - (k + 1) / 2.0) ** 2))
    p = float(_sps.chi2.sf(chi2, k - 1))
    return FriedmanResult(mean_ranks, chi2, p)
