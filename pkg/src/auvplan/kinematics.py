"""Vehicle state conventions and velocity composition.

World frame is NED (North, East, Down-positive depth); the body frame
carries surge/sway/heave.  The vehicle travels at constant water-
referenced speed; the current adds a horizontal drift (no vertical
component), which is how the cost model derives ground-referenced
velocities along a candidate path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def wrap_angle(a):
    """Normalize angle(s) to (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(a, dtype=float), 2.0 * np.pi)


@dataclass(frozen=True)
class NedState:
    """Position and attitude in the NED frame; angles in (-pi, pi]."""

    x: float
    y: float
    z: float
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0

    def __post_init__(self):
        for name in ("roll", "pitch", "yaw"):
            object.__setattr__(self, name, float(wrap_angle(getattr(self, name))))


@dataclass(frozen=True)
class BodyVelocity:
    """Body-frame rates: surge/sway/heave (m/s) and roll/pitch/yaw rates (rad/s)."""

    u: float = 0.0
    v: float = 0.0
    w: float = 0.0
    p: float = 0.0
    q: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        if not all(np.isfinite([self.u, self.v, self.w, self.p, self.q, self.r])):
            raise ValueError("body velocity components must be finite")


def rotation_ned_from_body(pitch: float, yaw: float) -> np.ndarray:
    """Body-to-NED rotation for a roll-stabilized vehicle (yaw then pitch)."""
    ct, st = np.cos(pitch), np.sin(pitch)
    cp, sp = np.cos(yaw), np.sin(yaw)
    return np.array(
        [
            [cp * ct, -sp, cp * st],
            [sp * ct, cp, sp * st],
            [-st, 0.0, ct],
        ]
    )


def compose_velocity(
    speed: float,
    pitch: float,
    yaw: float,
    current: tuple[float, float, float] = (0.0, 0.0, 0.0),
) -> tuple[float, float, float]:
    """Ground-referenced (u, v, w) for the given attitude and current.

    ``current`` is (magnitude, horizontal direction, vertical direction);
    the current contributes no vertical component, so w depends on the
    vehicle pitch alone.
    """
    c_mag, c_psi, c_theta = current
    u = speed * np.cos(pitch) * np.cos(yaw) + c_mag * np.cos(c_theta) * np.cos(c_psi)
    v = speed * np.cos(pitch) * np.sin(yaw) + c_mag * np.cos(c_theta) * np.sin(c_psi)
    w = speed * np.sin(pitch)
    return float(u), float(v), float(w)


def compose_velocity_arrays(
    speed: float,
    pitch: np.ndarray,
    yaw: np.ndarray,
    current_u: np.ndarray,
    current_v: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized velocity composition with a planar current given as (u_c, v_c)."""
    ct = np.cos(pitch)
    u = speed * ct * np.cos(yaw) + current_u
    v = speed * ct * np.sin(yaw) + current_v
    w = speed * np.sin(pitch)
    return u, v, w
