"""AODV parameter search space and genome helpers.

A genome is a 1-D float array with one entry per parameter. Integer-kind
parameters are stored as whole-valued floats so that every variation
operator can use plain float arithmetic on the full vector.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

CONTINUOUS = "continuous"
INTEGER = "integer"


@dataclass(frozen=True)
class ParameterSpec:
    name: str
    lower: float
    upper: float
    kind: str = CONTINUOUS

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"{self.name}: lower bound must be < upper bound")
        if self.kind not in (CONTINUOUS, INTEGER):
            raise ValueError(f"{self.name}: unknown kind {self.kind!r}")
        if self.kind == INTEGER and not (
            float(self.lower).is_integer() and float(self.upper).is_integer()
        ):
            raise ValueError(f"{self.name}: integer parameter needs whole bounds")

    @property
    def width(self) -> float:
        return self.upper - self.lower


class ParameterSpace:
    """Ordered collection of :class:`ParameterSpec` with vectorised bounds."""

    def __init__(self, specs: Sequence[ParameterSpec]):
        if not specs:
            raise ValueError("a parameter space needs at least one parameter")
        self.specs = tuple(specs)
        self.lower = np.array([s.lower for s in self.specs], dtype=float)
        self.upper = np.array([s.upper for s in self.specs], dtype=float)
        self.integer_mask = np.array([s.kind == INTEGER for s in self.specs])
        self.names = tuple(s.name for s in self.specs)

    @classmethod
    def box(cls, n: int, lower: float = 0.0, upper: float = 1.0, prefix: str = "x"):
        """Continuous hyper-rectangle, e.g. the ZDT decision space."""
        return cls([ParameterSpec(f"{prefix}{i + 1}", lower, upper) for i in range(n)])

    def __len__(self) -> int:
        return len(self.specs)

    def __iter__(self):
        return iter(self.specs)

    def __eq__(self, other):
        return isinstance(other, ParameterSpace) and self.specs == other.specs

    def __hash__(self):
        return hash(self.specs)

    def __repr__(self):
        return f"ParameterSpace({len(self)} parameters: {', '.join(self.names)})"

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower


AODV_SPACE = ParameterSpace(
    [
        ParameterSpec("hello_interval", 1.0, 20.0),
        ParameterSpec("active_route_timeout", 1.0, 20.0),
        ParameterSpec("my_route_timeout", 1.0, 40.0),
        ParameterSpec("node_traversal_time", 0.01, 15.0),
        ParameterSpec("max_rreq_timeout", 1.0, 100.0),
        ParameterSpec("net_diameter", 3, 100, INTEGER),
        ParameterSpec("allowed_hello_loss", 0, 20, INTEGER),
        ParameterSpec("req_retries", 0, 20, INTEGER),
        ParameterSpec("ttl_start", 1, 40, INTEGER),
        ParameterSpec("ttl_increment", 1, 20, INTEGER),
        ParameterSpec("ttl_threshold", 1, 60, INTEGER),
    ]
)


def _as_vector(space: ParameterSpace, g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.ndim != 1 or g.shape[0] != len(space):
        raise ValueError(
            f"genome must have {len(space)} components, got shape {g.shape}"
        )
    return g


def round_half_up(x):
    """Round to nearest whole value, ties toward the upper value."""
    return np.floor(np.asarray(x, dtype=float) + 0.5)


def validate_genome(space: ParameterSpace, g) -> bool:
    """True iff ``g`` respects every bound and integrality constraint.

    Raises ValueError when the component count does not match the space.
    """
    g = _as_vector(space, g)
    if not np.all(np.isfinite(g)):
        return False
    if np.any(g < space.lower) or np.any(g > space.upper):
        return False
    ints = g[space.integer_mask]
    return bool(np.all(ints == np.floor(ints)))


def clamp(space: ParameterSpace, g) -> np.ndarray:
    """Project ``g`` onto the space: clip to bounds, then round integer kinds.

    Works on a single genome or on a 2-D array of genomes (one per row).
    """
    g = np.asarray(g, dtype=float)
    if g.shape[-1] != len(space):
        raise ValueError(
            f"genome must have {len(space)} components, got shape {g.shape}"
        )
    out = np.clip(g, space.lower, space.upper)
    if space.integer_mask.any():
        out[..., space.integer_mask] = round_half_up(out[..., space.integer_mask])
    return out


def genome_as_dict(space: ParameterSpace, g) -> dict:
    g = _as_vector(space, g)
    return {
        spec.name: (int(v) if spec.kind == INTEGER else float(v))
        for spec, v in zip(space.specs, g)
    }


def write_genomes_csv(path_or_buf, space: ParameterSpace, genomes: Iterable) -> None:
    rows = [genome_as_dict(space, g) for g in genomes]
    own = isinstance(path_or_buf, (str, bytes)) or hasattr(path_or_buf, "__fspath__")
    fh = open(path_or_buf, "w", newline="") if own else path_or_buf
    try:
        writer = csv.DictWriter(fh, fieldnames=list(space.names))
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if own:
            fh.close()


def read_genomes_csv(path_or_buf, space: ParameterSpace = AODV_SPACE) -> np.ndarray:
    """Read genomes written by :func:`write_genomes_csv` (columns by name)."""
    if isinstance(path_or_buf, str) and "\n" in path_or_buf:
        path_or_buf = io.StringIO(path_or_buf)
    own = not hasattr(path_or_buf, "read")
    fh = open(path_or_buf, newline="") if own else path_or_buf
    try:
        reader = csv.DictReader(fh)
        missing = set(space.names) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"genome CSV lacks columns: {sorted(missing)}")
        rows = [[float(row[name]) for name in space.names] for row in reader]
    finally:
        if own:
            fh.close()
    return np.array(rows, dtype=float).reshape(-1, len(space))
