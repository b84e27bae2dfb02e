"""Time-optimal 3-D AUV path planning in current-disturbed waters.

Differential evolution searches the free control points of a clamped
B-spline between fixed mission endpoints; candidates are scored by flight
time plus penalties for map/obstacle collisions and kinodynamic limit
violations, against an occupancy grid, a Lamb-vortex current field, and
stochastically realized obstacles.
"""

from .cost import ConstraintLimits, CostBreakdown, PenaltyWeights, total_cost, travel_time
from .de import ConvergenceTrace, DEConfig, DEResult, run as run_de
from .env import (
    CurrentField,
    GridMap,
    LambVortex,
    Obstacle,
    ObstacleKind,
    RealizedObstacle,
    cluster_map,
)
from .planner import PlanResult, plan
from .scenario import Scenario, ScenarioError, load_scenario, save_scenario
from .spline import ControlPolygon, Trajectory, evaluate, path_length

__version__ = "0.1.0"

__all__ = [
    "ConstraintLimits",
    "ControlPolygon",
    "ConvergenceTrace",
    "CostBreakdown",
    "CurrentField",
    "DEConfig",
    "DEResult",
    "GridMap",
    "LambVortex",
    "Obstacle",
    "ObstacleKind",
    "PenaltyWeights",
    "PlanResult",
    "RealizedObstacle",
    "Scenario",
    "ScenarioError",
    "Trajectory",
    "cluster_map",
    "evaluate",
    "load_scenario",
    "path_length",
    "plan",
    "run_de",
    "save_scenario",
    "total_cost",
    "travel_time",
]
