"""Synthetic VANET scenarios and their plain-text file format.

A scenario file is ``key = value`` lines followed by optional ``[positions]``
and ``[flows]`` sections::

    node_count = 3
    width = 600
    height = 400
    mobility = static
    duration = 10
    seed = 1

    [positions]
    0, 0
    200, 0

    [flows]
    # source, destination, bitrate_kbps, packet_size_bytes, start[, stop]
    0, 2, 64, 800, 1.25

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

STATIC = "static"
RANDOM_WAYPOINT = "random_waypoint"


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Flow:
    source: int
    destination: int
    bitrate_kbps: float
    packet_size: int
    start: float = 1.0
    stop: float | None = None

    @property
    def interval(self) -> float:
        return self.packet_size * 8.0 / (self.bitrate_kbps * 1000.0)


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything the simulator needs; two equal configs give equal results.

    Times are seconds, distances metres. ``positions`` pins the initial node
    placement (required for hand-built static layouts); otherwise nodes are
    placed uniformly at random from ``seed``.
    """

    node_count: int
    area: tuple = (600.0, 400.0)
    radio_range: float = 150.0
    mobility: str = RANDOM_WAYPOINT
    speed_range: tuple = (5.0, 15.0)
    flows: tuple = ()
    duration: float = 180.0
    seed: int = 0
    positions: tuple | None = None
    channel_rate_kbps: float = 2000.0
    control_size: int = 64
    backoff_slot: float = 0.0005
    collision_prob: float = 0.05
    mac_retries: int = 3
    queue_limit: int = 50
    buffer_limit: int = 64
    buffer_timeout: float = 30.0
    snapshot_dt: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "area", tuple(float(a) for a in self.area))
        object.__setattr__(self, "speed_range", tuple(float(s) for s in self.speed_range))
        object.__setattr__(self, "flows", tuple(self.flows))
        if self.positions is not None:
            object.__setattr__(
                self, "positions", tuple((float(x), float(y)) for x, y in self.positions)
            )
        self.validate()

    def validate(self) -> None:
        if self.node_count < 1:
            raise ScenarioError("node_count must be positive")
        if not self.duration > 0:
            raise ScenarioError("duration must be positive")
        if self.mobility not in (STATIC, RANDOM_WAYPOINT):
            raise ScenarioError(f"unknown mobility model {self.mobility!r}")
        if self.radio_range <= 0 or self.channel_rate_kbps <= 0:
            raise ScenarioError("radio_range and channel_rate_kbps must be positive")
        if not 0 <= self.collision_prob < 1:
            raise ScenarioError("collision_prob must lie in [0, 1)")
        if self.positions is not None and len(self.positions) != self.node_count:
            raise ScenarioError("positions must list one (x, y) per node")
        if self.mobility == RANDOM_WAYPOINT and not 0 < self.speed_range[0] <= self.speed_range[1]:
            raise ScenarioError("speed_range must be 0 < min <= max")
        if not self.flows:
            raise ScenarioError("scenario defines no flows")
        for f in self.flows:
            if not (0 <= f.source < self.node_count and 0 <= f.destination < self.node_count):
                raise ScenarioError(f"flow endpoint out of range: {f}")
            if f.source == f.destination:
                raise ScenarioError(f"flow source equals destination: {f}")
            if f.bitrate_kbps <= 0 or f.packet_size <= 0:
                raise ScenarioError(f"flow needs positive bitrate and packet size: {f}")

    def with_duration(self, duration: float) -> "ScenarioConfig":
        return dataclasses.replace(self, duration=float(duration))


# --- mobility and connectivity --------------------------------------------


def _initial_positions(sc: ScenarioConfig, rng: np.random.Generator) -> np.ndarray:
    if sc.positions is not None:
        return np.array(sc.positions, dtype=float)
    return rng.uniform((0.0, 0.0), sc.area, size=(sc.node_count, 2))


def trajectories(sc: ScenarioConfig) -> tuple[np.ndarray, np.ndarray]:
    """Snapshot times and node positions, shape ``(K,)`` and ``(K, N, 2)``."""
    rng = np.random.default_rng([sc.seed, 0x5EED])
    start = _initial_positions(sc, rng)
    if sc.mobility == STATIC:
        return np.zeros(1), start[None, :, :]
    k = int(math.ceil(sc.duration / sc.snapshot_dt)) + 1
    grid = np.arange(k) * sc.snapshot_dt
    out = np.empty((k, sc.node_count, 2))
    lo, hi = sc.speed_range
    for n in range(sc.node_count):
        times, points = [0.0], [start[n]]
        t = 0.0
        while t < sc.duration:
            target = rng.uniform((0.0, 0.0), sc.area)
            speed = rng.uniform(lo, hi)
            t += float(np.linalg.norm(target - points[-1])) / speed
            times.append(t)
            points.append(target)
        pts = np.array(points)
        out[:, n, 0] = np.interp(grid, times, pts[:, 0])
        out[:, n, 1] = np.interp(grid, times, pts[:, 1])
    return grid, out


@lru_cache(maxsize=16)
def neighbor_snapshots(sc: ScenarioConfig) -> tuple:
    """Unit-disk neighbour tuples per snapshot: ``snap[k][u]`` lists u's neighbours."""
    _, pos = trajectories(sc)
    diff = pos[:, :, None, :] - pos[:, None, :, :]
    within = np.einsum("knmd,knmd->knm", diff, diff) <= sc.radio_range ** 2
    idx = np.arange(sc.node_count)
    within[:, idx, idx] = False
    return tuple(
        tuple(tuple(int(v) for v in np.flatnonzero(row)) for row in snap) for snap in within
    )


# --- generators -------------------------------------------------------------

AREAS = {
    "small": (400.0, 300.0),    # 120,000 m^2
    "medium": (600.0, 400.0),   # 240,000 m^2
    "large": (600.0, 600.0),    # 360,000 m^2
}

# (area, vehicles, data sources) for the ten road situations
ROAD_SITUATIONS = (
    ("small", 20, 10),
    ("medium", 20, 10),
    ("medium", 30, 15),
    ("medium", 40, 20),
    ("large", 30, 15),
    ("large", 45, 23),
    ("large", 60, 30),
    ("large", 75, 38),
    ("large", 90, 45),
    ("large", 105, 53),
)
BITRATES = (64.0, 128.0, 256.0)
DEFAULT_PACKET_SIZE = 8192


def random_flows(node_count: int, sources: int, bitrate_kbps: float, packet_size: int,
                 rng: np.random.Generator, duration: float) -> tuple:
    chosen = rng.choice(node_count, size=min(sources, node_count), replace=False)
    flows = []
    for s in chosen:
        d = int(rng.integers(node_count - 1))
        if d >= s:
            d += 1
        start = 1.0 + float(rng.uniform(0.0, 1.0))
        flows.append(Flow(int(s), d, bitrate_kbps, packet_size, round(start, 6),
                          None if duration is None else float(duration)))
    return tuple(flows)


def generate_scenario(area: str = "medium", vehicles: int = 30, sources: int = 15,
                      bitrate_kbps: float = 256.0, duration: float = 180.0, seed: int = 0,
                      packet_size: int = DEFAULT_PACKET_SIZE, **overrides) -> ScenarioConfig:
    rng = np.random.default_rng([seed, 0xF10E])
    flows = random_flows(vehicles, sources, bitrate_kbps, packet_size, rng, None)
    return ScenarioConfig(
        node_count=vehicles,
        area=AREAS[area] if isinstance(area, str) else tuple(area),
        flows=flows,
        duration=duration,
        seed=seed,
        **overrides,
    )


def default_scenario(duration: float = 180.0, seed: int = 2017) -> ScenarioConfig:
    """Medium area, 30 vehicles, 15 sources at 256 kbps."""
    return generate_scenario("medium", 30, 15, 256.0, duration, seed)


def validation_scenarios(base_seed: int = 1000, duration: float = 180.0) -> list[ScenarioConfig]:
    """The 30-scenario validation set: 10 road situations x 3 bitrates.

    Scenario ``i`` (situation-major, bitrate-minor) is seeded with ``base_seed + i``.
    """
    out = []
    for i, ((area, vehicles, sources), rate) in enumerate(
        (s, r) for s in ROAD_SITUATIONS for r in BITRATES
    ):
        out.append(generate_scenario(area, vehicles, sources, rate, duration, base_seed + i))
    return out


def two_node_scenario(distance: float = 100.0, duration: float = 10.0, **kw) -> ScenarioConfig:
    """Static pair with one 64 kbps flow and an ideal (loss- and backoff-free) radio."""
    kw.setdefault("backoff_slot", 0.0)
    kw.setdefault("collision_prob", 0.0)
    return ScenarioConfig(
        node_count=2,
        area=(max(distance, 1.0), 1.0),
        radio_range=250.0,
        mobility=STATIC,
        positions=((0.0, 0.0), (distance, 0.0)),
        flows=(Flow(0, 1, 64.0, 800, 1.25),),
        duration=duration,
        seed=1,
        **kw,
    )


def chain_scenario(hops: int = 2, spacing: float = 200.0, duration: float = 5.0, **kw) -> ScenarioConfig:
    """Static line of ``hops + 1`` nodes, flow from the first to the last, ideal radio."""
    kw.setdefault("backoff_slot", 0.0)
    kw.setdefault("collision_prob", 0.0)
    n = hops + 1
    return ScenarioConfig(
        node_count=n,
        area=(spacing * hops, 1.0),
        radio_range=250.0,
        mobility=STATIC,
        positions=tuple((i * spacing, 0.0) for i in range(n)),
        flows=(Flow(0, n - 1, 64.0, 800, 1.25),),
        duration=duration,
        seed=1,
        **kw,
    )


# --- file format --------------------------------------------------------------

_SCALAR_FIELDS = {
    "node_count": int,
    "radio_range": float,
    "mobility": str,
    "duration": float,
    "seed": int,
    "channel_rate_kbps": float,
    "control_size": int,
    "backoff_slot": float,
    "collision_prob": float,
    "mac_retries": int,
    "queue_limit": int,
    "buffer_limit": int,
    "buffer_timeout": float,
    "snapshot_dt": float,
}


def format_scenario(sc: ScenarioConfig) -> str:
    lines = [
        f"node_count = {sc.node_count}",
        f"width = {sc.area[0]!r}",
        f"height = {sc.area[1]!r}",
        f"speed_min = {sc.speed_range[0]!r}",
        f"speed_max = {sc.speed_range[1]!r}",
    ]
    for key in _SCALAR_FIELDS:
        if key == "node_count":
            continue
        lines.append(f"{key} = {getattr(sc, key)!r}".replace("'", ""))
    if sc.positions is not None:
        lines += ["", "[positions]"]
        lines += [f"{x!r}, {y!r}" for x, y in sc.positions]
    lines += ["", "[flows]", "# source, destination, bitrate_kbps, packet_size, start[, stop]"]
    for f in sc.flows:
        row = [str(f.source), str(f.destination), repr(float(f.bitrate_kbps)),
               str(f.packet_size), repr(float(f.start))]
        if f.stop is not None:
            row.append(repr(float(f.stop)))
        lines.append(", ".join(row))
    return "\n".join(lines) + "\n"


def parse_scenario(text: str) -> ScenarioConfig:
    scalars: dict = {}
    positions: list = []
    flows: list = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("positions", "flows"):
                raise ScenarioError(f"line {lineno}: unknown section [{section}]")
            continue
        try:
            if section is None:
                key, _, value = line.partition("=")
                if not _:
                    raise ScenarioError(f"expected 'key = value', got {raw!r}")
                scalars[key.strip()] = value.strip()
            elif section == "positions":
                x, y = (float(v) for v in line.split(","))
                positions.append((x, y))
            else:
                parts = [p.strip() for p in line.split(",")]
                if len(parts) not in (4, 5, 6):
                    raise ScenarioError(f"flow needs 4-6 fields, got {len(parts)}")
                flows.append(Flow(
                    int(parts[0]), int(parts[1]), float(parts[2]), int(parts[3]),
                    float(parts[4]) if len(parts) > 4 else 1.0,
                    float(parts[5]) if len(parts) > 5 else None,
                ))
        except ScenarioError as exc:
            raise ScenarioError(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            raise ScenarioError(f"line {lineno}: {exc}") from None

    kwargs: dict = {}
    unknown = set(scalars) - set(_SCALAR_FIELDS) - {"width", "height", "speed_min", "speed_max"}
    if unknown:
        raise ScenarioError(f"unknown keys: {sorted(unknown)}")
    if "node_count" not in scalars:
        raise ScenarioError("node_count is required")
    for key, conv in _SCALAR_FIELDS.items():
        if key in scalars:
            try:
                kwargs[key] = conv(scalars[key])
            except ValueError:
                raise ScenarioError(f"bad value for {key}: {scalars[key]!r}") from None
    if "width" in scalars or "height" in scalars:
        kwargs["area"] = (float(scalars.get("width", 600)), float(scalars.get("height", 400)))
    if "speed_min" in scalars or "speed_max" in scalars:
        kwargs["speed_range"] = (float(scalars.get("speed_min", 5)), float(scalars.get("speed_max", 15)))
    if positions:
        kwargs["positions"] = tuple(positions)
    return ScenarioConfig(flows=tuple(flows), **kwargs)


def load_scenario(path) -> ScenarioConfig:
    return parse_scenario(Path(path).read_text())


def save_scenario(sc: ScenarioConfig, path) -> None:
    Path(path).write_text(format_scenario(sc))
