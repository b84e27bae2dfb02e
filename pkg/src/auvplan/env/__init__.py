"""Operating terrain: occupancy grid, turbulent current field, uncertain obstacles."""

from .gridmap import (
    DegenerateClusteringError,
    GridMap,
    cluster_map,
    is_forbidden,
    kmeans_1d,
    read_pgm,
    synthetic_raster,
    write_pgm,
)
from .currents import CurrentField, LambVortex, current_magnitude_stats, sample_current
from .obstacles import (
    Obstacle,
    ObstacleKind,
    RealizedObstacle,
    advance_obstacles,
    clamp_radius,
    realize_obstacles,
)

__all__ = [
    "CurrentField",
    "DegenerateClusteringError",
    "GridMap",
    "LambVortex",
    "Obstacle",
    "ObstacleKind",
    "RealizedObstacle",
    "advance_obstacles",
    "clamp_radius",
    "cluster_map",
    "current_magnitude_stats",
    "is_forbidden",
    "kmeans_1d",
    "read_pgm",
    "realize_obstacles",
    "sample_current",
    "synthetic_raster",
    "write_pgm",
]
