"""Uncertain circular obstacles: stochastic radii, drift, current coupling.

Obstacles are vertical cylinders described by a horizontal center circle.
Static ones keep their position but re-draw an uncertain radius each
evaluation epoch (half-normal growth around the base radius); moving ones
additionally drift with their own velocity plus, when current-coupled,
the local current, and their collision boundary inflates proportionally
to the current magnitude at their center.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

import numpy as np

from ..rng import DOMAIN_OBSTACLE, substream
from .currents import CurrentField


class ObstacleKind(Enum):
    STATIC = "static"
    MOVING = "moving"


@dataclass(frozen=True)
class Obstacle:
    kind: ObstacleKind
    center: tuple[float, float, float]
    base_radius: float
    radius_sigma: float = 20.0
    radius_bounds: tuple[float, float] = (0.0, float("inf"))
    velocity: tuple[float, float] = (0.0, 0.0)  # moving kind only
    current_coupled: bool = False               # moving kind only

    def __post_init__(self):
        if not self.base_radius > 0:
            raise ValueError("base_radius must be positive")
        if self.radius_sigma < 0:
            raise ValueError("radius_sigma must be >= 0")
        lo, hi = self.radius_bounds
        if not 0 < lo <= hi:
            raise ValueError("radius_bounds must satisfy 0 < lo <= hi")


@dataclass(frozen=True)
class RealizedObstacle:
    """A concrete circle, valid for one evaluation epoch."""

    center: tuple[float, float, float]
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")


def clamp_radius(base: float, deviate: float, bounds: tuple[float, float]) -> float:
    """Radius realization rule: base grown by |deviate|, clamped to bounds."""
    return float(min(max(base + abs(deviate), bounds[0]), bounds[1]))


def realize_obstacles(
    obstacles: Sequence[Obstacle], epoch: int, seed: int
) -> tuple[RealizedObstacle, ...]:
    """Draw one radius per obstacle for this epoch.

    Deterministic given (seed, epoch, obstacle index), so every candidate
    scored within one epoch sees the same realization.
    """
    realized = []
    for index, ob in enumerate(obstacles):
        rng = substream(seed, DOMAIN_OBSTACLE, epoch, index)
        deviate = rng.normal(0.0, ob.radius_sigma)
        realized.append(
            RealizedObstacle(
                center=ob.center,
                radius=clamp_radius(ob.base_radius, deviate, ob.radius_bounds),
            )
        )
    return tuple(realized)


def advance_obstacles(
    obstacles: Sequence[Obstacle],
    fld: CurrentField,
    dt: float,
    *,
    growth_gain: float = 0.05,
) -> tuple[Obstacle, ...]:
    """Advance moving obstacles by one time step; static ones are unchanged.

    Moving obstacles translate by (velocity + local current) * dt when
    current-coupled, else by velocity * dt, and their base radius grows by
    |current| * dt * growth_gain, clamped to the radius bounds.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    out = []
    for ob in obstacles:
        if ob.kind is not ObstacleKind.MOVING:
            out.append(ob)
            continue
        uc, vc = fld.sample(ob.center[:2])
        vx, vy = ob.velocity
        if ob.current_coupled:
            vx, vy = vx + uc, vy + vc
        grown = ob.base_radius + float(np.hypot(uc, vc)) * dt * growth_gain
        lo, hi = ob.radius_bounds
        out.append(
            replace(
                ob,
                center=(ob.center[0] + vx * dt, ob.center[1] + vy * dt, ob.center[2]),
                base_radius=min(max(grown, lo), hi),
            )
        )
    return tuple(out)
