"""Scene and convergence figures, rendered to reproducible SVG files.

Output must be byte-identical across runs for golden comparisons, so the
SVG backend gets a fixed hash salt and the creation date is stripped from
the metadata.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap, Normalize
from matplotlib.patches import Circle

from .de import ConvergenceTrace
from .env.currents import CurrentField
from .env.gridmap import GridMap
from .env.obstacles import RealizedObstacle
from .spline import Trajectory

_WATER = "#dcebf5"
_LAND = "#3a4652"
_RC = {"svg.hashsalt": "auvplan", "svg.fonttype": "path"}


@dataclass(frozen=True)
class RenderInfo:
    arrows: int
    bytes_written: int


def _save(fig, out_path) -> int:
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)
    with open(out_path, "rb") as fh:
        return len(fh.read())


def render_scene(
    gmap: GridMap,
    fld: CurrentField,
    obstacles: Sequence[RealizedObstacle],
    traj: Trajectory | None,
    start,
    goal,
    out_path,
    *,
    quiver_block: int = 8,
    uncertainty_radii: Sequence[float] | None = None,
    title: str | None = None,
) -> RenderInfo:
    """Draw map, current quiver, obstacles, and path into an SVG file.

    One arrow is drawn per ``quiver_block``-square cell block, colored by
    current magnitude (blue calm, red strong); a zero field draws no
    arrows at all.  Obstacles show their realized circle plus a dashed
    uncertainty ring at ``uncertainty_radii`` when given.
    """
    with matplotlib.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(7.2, 6.0))
        x0, x1, y0, y1 = gmap.extent
        ax.imshow(
            gmap.occupancy,
            origin="lower",
            extent=(x0, x1, y0, y1),
            cmap=ListedColormap([_WATER, _LAND]),
            interpolation="nearest",
            zorder=0,
        )

        arrows = 0
        grid = fld.grid_velocities(gmap)
        magnitude = np.hypot(grid[..., 0], grid[..., 1])
        if magnitude.max() > 0:
            step = max(1, quiver_block)
            iy = np.arange(step // 2, gmap.height, step)
            ix = np.arange(step // 2, gmap.width, step)
            gx, gy = np.meshgrid(ix, iy)
            water = ~gmap.occupancy[gy, gx]
            px = x0 + (gx[water] + 0.5) * gmap.cell_size
            py = y0 + (gy[water] + 0.5) * gmap.cell_size
            u = grid[gy[water], gx[water], 0]
            v = grid[gy[water], gx[water], 1]
            arrows = int(px.size)
            if arrows:
                quiv = ax.quiver(
                    px, py, u, v, np.hypot(u, v),
                    cmap="coolwarm",
                    norm=Normalize(vmin=0.0, vmax=float(magnitude.max())),
                    width=0.0022, zorder=1,
                )
                quiv.set_gid("current-arrows")
                cbar = fig.colorbar(quiv, ax=ax, shrink=0.85, pad=0.02)
                cbar.set_label("current magnitude (m/s)")

        for i, ob in enumerate(obstacles):
            ax.add_patch(
                Circle(ob.center[:2], ob.radius, facecolor="#c8553d", alpha=0.45,
                       edgecolor="#7a2e1d", linewidth=1.0, zorder=2,
                       gid=f"obstacle-{i}")
            )
            if uncertainty_radii is not None and uncertainty_radii[i] > ob.radius:
                ax.add_patch(
                    Circle(ob.center[:2], uncertainty_radii[i], fill=False,
                           edgecolor="#7a2e1d", linestyle="--", linewidth=0.8,
                           zorder=2, gid=f"obstacle-ring-{i}")
                )

        if traj is not None:
            ax.plot(traj.positions[:, 0], traj.positions[:, 1], color="#111111",
                    linewidth=1.6, zorder=3, gid="path")
        ax.plot([start[0]], [start[1]], marker="o", color="#1a7a3a", markersize=9,
                zorder=4, gid="start-marker")
        ax.plot([goal[0]], [goal[1]], marker="*", color="#b7122e", markersize=14,
                zorder=4, gid="goal-marker")

        ax.set_xlim(x0, x1)
        ax.set_ylim(y0, y1)
        ax.set_aspect("equal")
        ax.set_xlabel("x (m)")
        ax.set_ylabel("y (m)")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        size = _save(fig, out_path)
    return RenderInfo(arrows=arrows, bytes_written=size)


def render_convergence(trace: ConvergenceTrace, out_path, *, title: str | None = None) -> int:
    """Best/mean cost and collision violation per generation, as SVG."""
    generations = [row.generation for row in trace.rows]
    best = [row.best_cost for row in trace.rows]
    mean = [row.mean_cost for row in trace.rows]
    collision = [row.detail.get("collision_fraction", 0.0) for row in trace.rows]

    with matplotlib.rc_context(_RC):
        fig, (ax_cost, ax_col) = plt.subplots(2, 1, figsize=(6.4, 6.0), sharex=True)
        ax_cost.plot(generations, best, color="#0b5394", label="best cost")
        ax_cost.plot(generations, mean, color="#93b8d4", label="mean cost")
        ax_cost.set_yscale("log")
        ax_cost.set_ylabel("cost (s-equivalent)")
        ax_cost.legend(loc="upper right")
        ax_col.plot(generations, collision, color="#b7122e")
        ax_col.set_ylabel("collision fraction")
        ax_col.set_xlabel("generation")
        if title:
            ax_cost.set_title(title)
        fig.tight_layout()
        return _save(fig, out_path)
