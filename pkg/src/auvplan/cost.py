"""Trajectory scoring: travel time plus weighted constraint violations.

The performance index is flight time at constant water-referenced speed;
a penalty sums the worst excess of each kinodynamic quantity over its
limit plus a collision term.  The collision term is an infeasibility
indicator scaled by the violating sample fraction: any nonzero value
means infeasible, while the fraction grades infeasible candidates so the
optimizer can rank them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .env.currents import CurrentField
from .env.gridmap import GridMap
from .env.obstacles import RealizedObstacle
from .kinematics import compose_velocity_arrays, wrap_angle
from .spline import MIN_SEGMENT_LENGTH, Trajectory

TimeMode = Literal["literal", "current"]

VIOLATION_TERMS = ("z_under", "z_over", "surge", "sway", "pitch", "yaw_rate")

# below this fraction of the water speed a segment counts as unnavigable
SPEED_FLOOR_FRACTION = 0.1


@dataclass(frozen=True)
class ConstraintLimits:
    z_min: float = 0.0
    z_max: float = 1000.0
    u_max: float = 5.0
    v_max: float = 5.0
    theta_max: float = np.pi / 4
    yaw_rate_max: float = 0.5

    def __post_init__(self):
        if not self.z_min < self.z_max:
            raise ValueError("z_min must be below z_max")
        if min(self.u_max, self.v_max, self.theta_max, self.yaw_rate_max) <= 0:
            raise ValueError("rate and angle limits must be positive")


@dataclass(frozen=True)
class PenaltyWeights:
    q: float = 100.0
    z_under: float = 1.0
    z_over: float = 1.0
    surge: float = 1.0
    sway: float = 1.0
    pitch: float = 1.0
    yaw_rate: float = 1.0
    collision: float = 1.0

    def __post_init__(self):
        values = (self.q, self.z_under, self.z_over, self.surge, self.sway,
                  self.pitch, self.yaw_rate, self.collision)
        if any(w < 0 for w in values):
            raise ValueError("penalty weights must be >= 0")

    def term(self, name: str) -> float:
        return getattr(self, name)


@dataclass(frozen=True)
class CostBreakdown:
    travel_time: float
    violations: dict[str, float]
    collision_indicator: int
    collision_fraction: float
    unnavigable_segments: int
    total: float

    @property
    def feasible(self) -> bool:
        return self.collision_indicator == 0 and all(
            v == 0.0 for v in self.violations.values()
        )

    def as_row(self) -> dict[str, float]:
        row = {
            "travel_time": self.travel_time,
            "collision_indicator": float(self.collision_indicator),
            "collision_fraction": self.collision_fraction,
        }
        row.update({name: self.violations[name] for name in VIOLATION_TERMS})
        row["unnavigable_segments"] = float(self.unnavigable_segments)
        return row


def _current_at(fld: CurrentField | None, points: np.ndarray) -> np.ndarray:
    if fld is None:
        return np.zeros((points.shape[0], 2))
    return fld.sample_many(points)


def segment_times(
    traj: Trajectory,
    speed: float,
    fld: CurrentField | None = None,
    mode: TimeMode = "literal",
) -> tuple[np.ndarray, int]:
    """Per-segment times and the count of unnavigable segments.

    Literal mode divides each segment by the water speed regardless of
    current.  Current-aware mode divides by the ground speed composed at
    the segment midpoint, floored at a fraction of the water speed so a
    canceling current caps the segment time instead of blowing it up.
    """
    if not speed > 0:
        raise ValueError("speed must be positive")
    seg = traj.seg_len[:-1]
    if mode == "literal":
        return seg / speed, 0
    if mode != "current":
        raise ValueError(f"unknown time mode {mode!r}")
    mid = 0.5 * (traj.positions[:-1, :2] + traj.positions[1:, :2])
    cur = _current_at(fld, mid)
    u, v, w = compose_velocity_arrays(
        speed, traj.theta[:-1], traj.psi[:-1], cur[:, 0], cur[:, 1]
    )
    ground = np.sqrt(u * u + v * v + w * w)
    floor = SPEED_FLOOR_FRACTION * speed
    moving = seg > MIN_SEGMENT_LENGTH
    unnavigable = int(np.count_nonzero(moving & (ground <= floor)))
    return seg / np.maximum(ground, floor), unnavigable


def travel_time(
    traj: Trajectory,
    speed: float,
    fld: CurrentField | None = None,
    mode: TimeMode = "literal",
) -> float:
    """Path flight time in seconds."""
    times, _ = segment_times(traj, speed, fld, mode)
    return float(times.sum())


def collision_violation(
    traj: Trajectory,
    gmap: GridMap,
    obstacles: Sequence[RealizedObstacle] = (),
) -> tuple[int, float]:
    """(indicator, violating-sample fraction) against map and obstacles.

    A sample violates if its cell is forbidden (or off-map) or if its
    horizontal distance to any obstacle center is within the realized
    radius; obstacles are vertical cylinders.
    """
    xy = traj.positions[:, :2]
    bad = gmap.forbidden_mask(xy)
    for ob in obstacles:
        d2 = (xy[:, 0] - ob.center[0]) ** 2 + (xy[:, 1] - ob.center[1]) ** 2
        bad |= d2 <= ob.radius * ob.radius
    fraction = float(np.count_nonzero(bad)) / traj.m
    return (1 if fraction > 0 else 0), fraction


def kinodynamic_violation(
    traj: Trajectory,
    speed: float,
    fld: CurrentField | None,
    limits: ConstraintLimits,
) -> dict[str, float]:
    """Worst excess of each constrained quantity along the path.

    Depth violations are the excursion below z_min / above z_max; surge,
    sway, and pitch are sampled pointwise; the yaw rate uses the heading
    change per literal-mode segment time.
    """
    z = traj.positions[:, 2]
    cur = _current_at(fld, traj.positions[:, :2])
    u, v, _ = compose_velocity_arrays(speed, traj.theta, traj.psi, cur[:, 0], cur[:, 1])

    seg = traj.seg_len[:-1]
    moving = seg > MIN_SEGMENT_LENGTH
    yaw_rate = 0.0
    if moving.any():
        dpsi = np.abs(wrap_angle(np.diff(traj.psi)))[moving]
        dt = seg[moving] / speed
        yaw_rate = float((dpsi / dt).max())

    return {
        "z_under": max(0.0, float(limits.z_min - z.min())),
        "z_over": max(0.0, float(z.max() - limits.z_max)),
        "surge": max(0.0, float(u.max() - limits.u_max)),
        "sway": max(0.0, float(np.abs(v).max() - limits.v_max)),
        "pitch": max(0.0, float(traj.theta.max() - limits.theta_max)),
        "yaw_rate": max(0.0, yaw_rate - limits.yaw_rate_max),
    }


def total_cost(
    traj: Trajectory,
    speed: float,
    fld: CurrentField | None,
    gmap: GridMap,
    obstacles: Sequence[RealizedObstacle],
    limits: ConstraintLimits,
    weights: PenaltyWeights,
    mode: TimeMode = "literal",
) -> CostBreakdown:
    """Penalized path cost: time plus weighted violation terms."""
    times, unnavigable = segment_times(traj, speed, fld, mode)
    t_total = float(times.sum())
    violations = kinodynamic_violation(traj, speed, fld, limits)
    indicator, fraction = collision_violation(traj, gmap, obstacles)

    penalty = sum(weights.term(name) * violations[name] for name in VIOLATION_TERMS)
    penalty += weights.collision * indicator * fraction
    return CostBreakdown(
        travel_time=t_total,
        violations=violations,
        collision_indicator=indicator,
        collision_fraction=fraction,
        unnavigable_segments=unnavigable,
        total=t_total + weights.q * penalty,
    )
