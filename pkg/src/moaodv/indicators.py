"""Bi-objective Pareto front quality indicators.

All indicators assume minimisation. Fronts are ``(n, 2)`` arrays; the
hypervolume, epsilon and spread routines expect them already normalised
against a :class:`ReferenceFront`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import nondominated
from .utils.validation import check_objectives


@dataclass(frozen=True)
class ReferenceFront:
    points: np.ndarray
    bounds: tuple[tuple[float, float], tuple[float, float]]

    @property
    def lower(self) -> np.ndarray:
        return np.array([b[0] for b in self.bounds], dtype=float)

    @property
    def upper(self) -> np.ndarray:
        return np.array([b[1] for b in self.bounds], dtype=float)

    @classmethod
    def from_points(cls, points, bounds=None) -> "ReferenceFront":
        pts = sort_front(check_objectives(points))
        pts = pts[nondominated(pts)]
        if bounds is None:
            bounds = tuple((float(lo), float(hi)) for lo, hi in zip(pts.min(0), pts.max(0)))
        return cls(pts, tuple((float(lo), float(hi)) for lo, hi in bounds))


def sort_front(F) -> np.ndarray:
    """Rows sorted ascending by f1, then f2."""
    F = np.asarray(F, dtype=float).reshape(-1, 2)
    return F[np.lexsort((F[:, 1], F[:, 0]))]


def pareto_filter(F) -> np.ndarray:
    """Sorted non-dominated, duplicate-free subset of ``F``."""
    F = check_objectives(F)
    return sort_front(F[nondominated(F)])


def is_front(F) -> bool:
    """True iff rows are sorted by strictly increasing f1 and strictly decreasing f2."""
    F = np.asarray(F, dtype=float).reshape(-1, 2)
    if len(F) < 2:
        return True
    return bool(np.all(np.diff(F[:, 0]) > 0) and np.all(np.diff(F[:, 1]) < 0))


def merge_reference_front(fronts) -> ReferenceFront:
    """Union of several fronts with dominated and duplicate points removed."""
    arrays = [np.asarray(f, dtype=float).reshape(-1, 2) for f in fronts]
    arrays = [a for a in arrays if len(a)]
    if not arrays:
        raise ValueError("cannot build a reference front from empty fronts")
    return ReferenceFront.from_points(np.vstack(arrays))


def normalize_front(F, ref: ReferenceFront, discard_outside: bool = True) -> np.ndarray:
    """Map each objective to ``(v - min) / (max - min)`` using ``ref.bounds``.

    With ``discard_outside`` the points falling outside ``[0, 1]^2`` are dropped.
    """
    lo, hi = ref.lower, ref.upper
    span = hi - lo
    if np.any(span <= 0):
        raise ValueError(f"degenerate reference bounds {ref.bounds}")
    F = np.asarray(F, dtype=float).reshape(-1, 2)
    N = (F - lo) / span
    if discard_outside:
        N = N[np.all((N >= 0) & (N <= 1), axis=1)]
    return N


def hypervolume_2d(F, ref_point=(1.0, 1.0)) -> float:
    """Area dominated by a sorted, mutually non-dominated front up to ``ref_point``."""
    F = np.asarray(F, dtype=float).reshape(-1, 2)
    if len(F) == 0:
        return 0.0
    if not is_front(F):
        raise ValueError("hypervolume_2d needs a sorted, mutually non-dominated front")
    rx, ry = ref_point
    next_x = np.append(F[1:, 0], rx)
    return float(np.sum((next_x - F[:, 0]) * (ry - F[:, 1])))


def front_hypervolume(F, ref: ReferenceFront) -> float:
    """Normalise, filter and measure an arbitrary point set in one call."""
    N = normalize_front(F, ref)
    if len(N) == 0:
        return 0.0
    return hypervolume_2d(pareto_filter(N))


def additive_epsilon(a, ref) -> float:
    """Smallest shift ``e`` such that ``a - e`` weakly dominates every point of ``ref``."""
    A = np.asarray(a, dtype=float).reshape(-1, 2)
    R = np.asarray(ref, dtype=float).reshape(-1, 2)
    if len(A) == 0 or len(R) == 0:
        raise ValueError("additive epsilon needs two non-empty fronts")
    # gap[r, p] = max_i (p_i - r_i)
    gap = np.max(A[None, :, :] - R[:, None, :], axis=2)
    return float(np.max(np.min(gap, axis=1)))


def spread(F, ref) -> float:
    """Deb's spread over a front sorted by f1.

    ``ref`` supplies the extreme points (lowest and highest f1) of the
    reference front. A single-point front scores 1.0.
    """
    F = sort_front(F)
    if len(F) == 0:
        raise ValueError("spread of an empty front is undefined")
    if len(F) == 1:
        return 1.0
    R = sort_front(ref.points if isinstance(ref, ReferenceFront) else ref)
    d_f = float(np.linalg.norm(F[0] - R[0]))
    d_l = float(np.linalg.norm(F[-1] - R[-1]))
    gaps = np.linalg.norm(np.diff(F, axis=0), axis=1)
    mean = gaps.mean()
    denom = d_f + d_l + len(gaps) * mean
    if denom == 0:
        return 0.0
    return float((d_f + d_l + np.abs(gaps - mean).sum()) / denom)


def indicator_triple(F, ref: ReferenceFront) -> tuple[float, float, float]:
    """``(hypervolume, epsilon, spread)`` of ``F`` against ``ref``, all normalised."""
    N = pareto_filter(normalize_front(F, ref, discard_outside=False))
    R = normalize_front(ref.points, ref, discard_outside=False)
    inside = N[np.all((N >= 0) & (N <= 1), axis=1)]
    hv = hypervolume_2d(inside) if len(inside) else 0.0
    return hv, additive_epsilon(N, R), spread(N, R)
