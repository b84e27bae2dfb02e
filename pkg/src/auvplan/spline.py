"""B-spline trajectory encoding: control polygon in, sampled path out.

A candidate solution is a polygon of 3-D control points whose first and
last points are the fixed mission endpoints.  A clamped uniform knot
vector forces the curve through those endpoints; Cox-de Boor blending
turns the polygon into a smooth sampled path with per-sample heading,
pitch, and segment length.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .kinematics import wrap_angle

# segments shorter than this are arithmetic noise, not motion: headings are
# carried over and rate checks skip them
MIN_SEGMENT_LENGTH = 1e-9


def clamped_knots(n_points: int, order: int) -> np.ndarray:
    """Clamped uniform knot vector on [0, 1] for ``n_points`` control points."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if n_points < order:
        raise ValueError(f"need at least {order} control points for order {order}")
    interior = n_points - order
    inner = np.arange(1, interior + 1) / (interior + 1)
    return np.concatenate([np.zeros(order), inner, np.ones(order)])


def blending(i: int, order: int, t: float, knots: np.ndarray) -> float:
    """Cox-de Boor basis value B_{i,order}(t); 0/0 terms evaluate to 0."""
    knots = np.asarray(knots, dtype=float)
    if np.any(np.diff(knots) < 0):
        raise ValueError("knot sequence must be non-decreasing")
    if i < 0 or i + order >= knots.size:
        raise ValueError(f"basis index {i} out of range for order {order}")
    return float(_basis_column(i, order, np.asarray([t], dtype=float), knots)[0])


def _basis_column(i: int, order: int, ts: np.ndarray, knots: np.ndarray) -> np.ndarray:
    if order == 1:
        # half-open span, except the last non-empty span closes at the curve
        # end so t = 1 lands on the final basis function
        closing = (knots[i + 1] == knots[-1]) and (knots[i] < knots[i + 1])
        hit = (knots[i] <= ts) & ((ts < knots[i + 1]) | (closing & (ts == knots[i + 1])))
        return hit.astype(float)
    left = np.zeros_like(ts)
    right = np.zeros_like(ts)
    den_l = knots[i + order - 1] - knots[i]
    if den_l > 0:
        left = (ts - knots[i]) / den_l * _basis_column(i, order - 1, ts, knots)
    den_r = knots[i + order] - knots[i + 1]
    if den_r > 0:
        right = (knots[i + order] - ts) / den_r * _basis_column(i + 1, order - 1, ts, knots)
    return left + right


def basis_matrix(n_points: int, order: int, ts: np.ndarray) -> np.ndarray:
    """Blending values at each parameter: shape (len(ts), n_points)."""
    knots = clamped_knots(n_points, order)
    ts = np.asarray(ts, dtype=float)
    cols = [_basis_column(i, order, ts, knots) for i in range(n_points)]
    return np.column_stack(cols)


@dataclass(frozen=True)
class ControlPolygon:
    """Ordered 3-D control points; first and last are the fixed endpoints."""

    points: np.ndarray  # (n, 3)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 2:
            raise ValueError("control polygon needs at least 2 points of shape (n, 3)")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_free_points(cls, start, goal, free_points) -> "ControlPolygon":
        free = np.asarray(free_points, dtype=float).reshape(-1, 3)
        return cls(np.vstack([np.asarray(start, float), free, np.asarray(goal, float)]))

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def goal(self) -> np.ndarray:
        return self.points[-1]

    def chord_length(self) -> float:
        """Summed control-point chord lengths (upper-bound debug metric)."""
        return float(np.linalg.norm(np.diff(self.points, axis=0), axis=1).sum())


@dataclass(frozen=True)
class Trajectory:
    """Sampled path: parameter, position, heading, pitch, segment length."""

    t: np.ndarray          # (m,), strictly increasing over [0, 1]
    positions: np.ndarray  # (m, 3)
    psi: np.ndarray        # (m,), heading in (-pi, pi]
    theta: np.ndarray      # (m,), pitch in [-pi/2, pi/2]
    seg_len: np.ndarray    # (m,), distance to the next sample; last is 0

    def __post_init__(self):
        for name in ("t", "positions", "psi", "theta", "seg_len"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.t.size < 2 or np.any(np.diff(self.t) <= 0):
            raise ValueError("need m >= 2 strictly increasing parameters")

    @property
    def m(self) -> int:
        return self.t.size

    def length(self) -> float:
        return float(self.seg_len.sum())


def trajectory_from_samples(ts: np.ndarray, positions: np.ndarray) -> Trajectory:
    """Attach headings, pitch, and segment lengths to sampled positions.

    Angles come from consecutive position differences (quadrant-aware);
    zero-length segments inherit the previous sample's angles and the
    last sample copies the penultimate ones.
    """
    pos = np.asarray(positions, dtype=float)
    diffs = np.diff(pos, axis=0)
    seg = np.linalg.norm(diffs, axis=1)
    horiz = np.hypot(diffs[:, 0], diffs[:, 1])
    psi_raw = wrap_angle(np.arctan2(diffs[:, 1], diffs[:, 0]))
    theta_raw = np.arctan2(-diffs[:, 2], horiz)

    # forward-fill angles across zero-length segments (0 when none precede)
    moving = seg > MIN_SEGMENT_LENGTH
    seg = np.where(moving, seg, 0.0)
    src = np.where(moving, np.arange(seg.size), -1)
    src = np.maximum.accumulate(src)
    psi_seg = np.where(src >= 0, psi_raw[np.maximum(src, 0)], 0.0)
    theta_seg = np.where(src >= 0, theta_raw[np.maximum(src, 0)], 0.0)

    psi = np.concatenate([psi_seg, psi_seg[-1:]])
    theta = np.concatenate([theta_seg, theta_seg[-1:]])
    seg_len = np.concatenate([seg, [0.0]])
    return Trajectory(t=np.asarray(ts, float), positions=pos, psi=psi, theta=theta, seg_len=seg_len)


def evaluate(poly: ControlPolygon, order: int = 3, samples: int = 200) -> Trajectory:
    """Sample the clamped B-spline of ``poly`` at uniform parameters."""
    n = poly.points.shape[0]
    if n < order:
        raise ValueError(f"polygon has {n} points; order {order} needs at least {order}")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    ts = np.linspace(0.0, 1.0, samples)
    positions = basis_matrix(n, order, ts) @ poly.points
    return trajectory_from_samples(ts, positions)


def path_length(traj: Trajectory) -> float:
    """Polyline length of the sampled curve in meters."""
    return traj.length()


def write_trajectory_csv(traj: Trajectory, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "X", "Y", "Z", "psi", "theta", "seg_len"])
        for i in range(traj.m):
            x, y, z = traj.positions[i]
            writer.writerow(
                [
                    f"{traj.t[i]:.10g}",
                    f"{x:.10g}",
                    f"{y:.10g}",
                    f"{z:.10g}",
                    f"{traj.psi[i]:.10g}",
                    f"{traj.theta[i]:.10g}",
                    f"{traj.seg_len[i]:.10g}",
                ]
            )
