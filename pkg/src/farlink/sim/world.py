"""Seeded 2-D world: a drone on a waypoint path over moving targets.

State at frame index n is a pure function of (seed, config, n): the
initial state is drawn from SplitMix64(seed) and integrated with
`step_world`, which is deterministic (elastic bounce for targets,
piecewise-linear waypoint following for the drone).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from ..model import StreamId
from .rng import SplitMix64

DRONE_SPEED_M = 0.4  # per frame
WAYPOINT_COUNT = 6
WAYPOINT_MARGIN_M = 15.0
TARGET_SIZE_MIN_M = 1.0
TARGET_SIZE_SPAN_M = 1.5
TARGET_SPEED_MAX_M = 0.25  # per frame, per axis
TARGET_COLOR = (255, 0, 0)


class SourceMode(Enum):
    SYNTHETIC = "SYNTHETIC"
    FILE = "FILE"
    NETWORK = "NETWORK"


@dataclass(frozen=True)
class Target:
    pos: tuple[float, float]  # center, meters
    vel: tuple[float, float]  # meters per frame
    size: tuple[float, float]  # meters
    color: tuple[int, int, int] = TARGET_COLOR

    def __post_init__(self):
        if self.size[0] <= 0 or self.size[1] <= 0:
            raise ValueError("target size must be positive")


@dataclass(frozen=True)
class WorldState:
    seed: int
    bounds: tuple[float, float]
    frame_index: int
    drone_pos: tuple[float, float]
    drone_heading: float  # radians, world frame
    waypoints: tuple[tuple[float, float], ...]
    waypoint_idx: int
    targets: tuple[Target, ...]


@dataclass(frozen=True)
class SourceConfig:
    mode: SourceMode = SourceMode.SYNTHETIC
    camera: StreamId = StreamId.FPV
    resolution: tuple[int, int] = (640, 480)
    frame_rate_hz: float = 30.0
    seed: int = 0
    n_targets: int = 3
    bounds: tuple[float, float] = (100.0, 100.0)
    noise_amplitude: int = 0  # seeded per-pixel noise, +/- per channel
    path: str | None = None  # FILE mode
    endpoint: tuple[str, int] | None = None  # NETWORK mode listen address

    def __post_init__(self):
        if self.frame_rate_hz <= 0:
            raise ValueError("frame_rate_hz must be > 0")
        if self.resolution[0] < 16 or self.resolution[1] < 16:
            raise ValueError("resolution must be at least 16x16")
        if self.n_targets < 0:
            raise ValueError("n_targets must be >= 0")
        if not 0 <= self.noise_amplitude <= 8:
            raise ValueError("noise_amplitude must be within 0..8")


def initial_world(config: SourceConfig) -> WorldState:
    rng = SplitMix64(config.seed)
    bw, bh = config.bounds
    targets = []
    for _ in range(config.n_targets):
        w = TARGET_SIZE_MIN_M + rng.next_float() * TARGET_SIZE_SPAN_M
        h = TARGET_SIZE_MIN_M + rng.next_float() * TARGET_SIZE_SPAN_M
        x = w / 2 + rng.next_float() * (bw - w)
        y = h / 2 + rng.next_float() * (bh - h)
        vx = (rng.next_float() * 2.0 - 1.0) * TARGET_SPEED_MAX_M
        vy = (rng.next_float() * 2.0 - 1.0) * TARGET_SPEED_MAX_M
        targets.append(Target(pos=(x, y), vel=(vx, vy), size=(w, h)))
    mx = min(WAYPOINT_MARGIN_M, bw / 4)
    my = min(WAYPOINT_MARGIN_M, bh / 4)
    waypoints = tuple(
        (mx + rng.next_float() * (bw - 2 * mx), my + rng.next_float() * (bh - 2 * my))
        for _ in range(WAYPOINT_COUNT)
    )
    drone_pos = (bw / 2.0, bh / 2.0)
    heading = math.atan2(waypoints[0][1] - drone_pos[1], waypoints[0][0] - drone_pos[0])
    return WorldState(
        seed=config.seed,
        bounds=config.bounds,
        frame_index=0,
        drone_pos=drone_pos,
        drone_heading=heading,
        waypoints=waypoints,
        waypoint_idx=0,
        targets=tuple(targets),
    )


def _bounce(p: float, v: float, lo: float, hi: float) -> tuple[float, float]:
    if hi <= lo:  # object as wide as the world: pin to center
        return (lo + hi) / 2.0, 0.0
    p = p + v
    if p > hi:
        return 2.0 * hi - p, -v
    if p < lo:
        return 2.0 * lo - p, -v
    return p, v


def step_world(world: WorldState) -> WorldState:
    bw, bh = world.bounds
    targets = []
    for t in world.targets:
        hx, hy = t.size[0] / 2.0, t.size[1] / 2.0
        x, vx = _bounce(t.pos[0], t.vel[0], hx, bw - hx)
        y, vy = _bounce(t.pos[1], t.vel[1], hy, bh - hy)
        targets.append(replace(t, pos=(x, y), vel=(vx, vy)))

    wx, wy = world.waypoints[world.waypoint_idx]
    px, py = world.drone_pos
    dx, dy = wx - px, wy - py
    dist = math.hypot(dx, dy)
    if dist <= DRONE_SPEED_M:
        idx = (world.waypoint_idx + 1) % len(world.waypoints)
        pos = (wx, wy)
        nx, ny = world.waypoints[idx]
        heading = math.atan2(ny - wy, nx - wx)
    else:
        idx = world.waypoint_idx
        pos = (px + DRONE_SPEED_M * dx / dist, py + DRONE_SPEED_M * dy / dist)
        heading = math.atan2(dy, dx)
    return replace(
        world,
        frame_index=world.frame_index + 1,
        drone_pos=pos,
        drone_heading=heading,
        waypoint_idx=idx,
        targets=tuple(targets),
    )


def world_at(config: SourceConfig, n: int) -> WorldState:
    """World state after n steps; O(n), pipelines step incrementally instead."""
    if n < 0:
        raise ValueError("frame index must be >= 0")
    world = initial_world(config)
    for _ in range(n):
        world = step_world(world)
    return world
