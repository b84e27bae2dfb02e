"""Planar turbulent current model: superposed Lamb-Oseen vortices.

Each vortex contributes a divergence-free swirl with tangential speed
``(gamma / 2 pi r) * (1 - exp(-r^2 / rc^2))``, counter-clockwise for
positive circulation, vanishing smoothly at the core center.  A uniform
background flow is added on top.  The field is static in time, matching a
slowly-evolving deep-water current map.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import math

import numpy as np

from .gridmap import GridMap


@dataclass(frozen=True)
class LambVortex:
    center: tuple[float, float]
    circulation: float  # m^2/s, signed; > 0 swirls counter-clockwise
    core_radius: float  # m

    def __post_init__(self):
        if not self.core_radius > 0:
            raise ValueError("core_radius must be positive")
        if not math.isfinite(self.circulation):
            raise ValueError("circulation must be finite")


@dataclass(frozen=True)
class CurrentField:
    vortices: tuple[LambVortex, ...] = ()
    background: tuple[float, float] = (0.0, 0.0)
    # lazily filled per-cell velocity cache, keyed by the map's geometry
    _grid_cache: dict = field(default_factory=dict, repr=False, compare=False)
    _centers: np.ndarray = field(init=False, repr=False, compare=False)
    _gamma_over_2pi: np.ndarray = field(init=False, repr=False, compare=False)
    _inv_rc2: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vs = self.vortices
        object.__setattr__(self, "_centers",
                           np.array([v.center for v in vs], dtype=float).reshape(-1, 2))
        object.__setattr__(self, "_gamma_over_2pi",
                           np.array([v.circulation for v in vs]) / (2.0 * np.pi))
        object.__setattr__(self, "_inv_rc2",
                           np.array([1.0 / v.core_radius**2 for v in vs]))

    def sample_many(self, points: np.ndarray) -> np.ndarray:
        """Velocities (N, 2) at world points (N, 2)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        vel = np.tile(np.asarray(self.background, dtype=float), (pts.shape[0], 1))
        if not self.vortices:
            return vel
        dx = pts[:, 0, None] - self._centers[None, :, 0]  # (N, V)
        dy = pts[:, 1, None] - self._centers[None, :, 1]
        r2 = dx * dx + dy * dy
        # swirl_over_r = v_theta / r; the numerator vanishes with r^2, so a
        # query at a vortex center picks up exactly (0, 0) from it
        swirl_over_r = (
            self._gamma_over_2pi
            * -np.expm1(-r2 * self._inv_rc2)
            / np.where(r2 == 0.0, 1.0, r2)
        )
        vel[:, 0] += np.einsum("nv,nv->n", swirl_over_r, -dy)
        vel[:, 1] += np.einsum("nv,nv->n", swirl_over_r, dx)
        return vel

    def sample(self, p) -> tuple[float, float]:
        u, v = self.sample_many(np.asarray(p, dtype=float).reshape(1, 2))[0]
        return float(u), float(v)

    def grid_velocities(self, gmap: GridMap) -> np.ndarray:
        """Per cell-center velocities, shape (height, width, 2), cached."""
        key = (gmap.width, gmap.height, gmap.cell_size, gmap.origin)
        cached = self._grid_cache.get(key)
        if cached is None:
            ox, oy = gmap.origin
            xs = ox + (np.arange(gmap.width) + 0.5) * gmap.cell_size
            ys = oy + (np.arange(gmap.height) + 0.5) * gmap.cell_size
            gx, gy = np.meshgrid(xs, ys)
            pts = np.column_stack([gx.ravel(), gy.ravel()])
            cached = self.sample_many(pts).reshape(gmap.height, gmap.width, 2)
            self._grid_cache[key] = cached
        return cached


def sample_current(fld: CurrentField, p) -> tuple[float, float]:
    """Current velocity (u_c, v_c) at planar point ``p``."""
    return fld.sample(p)


def current_magnitude_stats(fld: CurrentField, gmap: GridMap) -> tuple[float, float, float]:
    """(min, max, mean) speed over the centers of allowed cells."""
    if gmap.occupancy.all():
        raise ValueError("map has no allowed cells")
    grid = fld.grid_velocities(gmap)
    mags = np.hypot(grid[..., 0], grid[..., 1])[~gmap.occupancy]
    return float(mags.min()), float(mags.max()), float(mags.mean())
