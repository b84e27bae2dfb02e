"""End-to-end planning: scenario in, best trajectory and artifacts out.

Candidate solutions are the free interior control points of a clamped
B-spline between the fixed start and goal.  Each DE generation is one
environment epoch: moving obstacles advance a step and every obstacle
re-draws its uncertain radius, shared by all candidates scored in that
generation so comparisons stay fair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import de
from .cost import CostBreakdown, total_cost
from .env.obstacles import Obstacle, RealizedObstacle, advance_obstacles, realize_obstacles
from .scenario import Environment, Scenario, build_environment
from .spline import ControlPolygon, Trajectory, basis_matrix, trajectory_from_samples


class EpochEnvironment:
    """Obstacle realizations per epoch, advanced and cached lazily."""

    def __init__(self, env: Environment, scenario: Scenario):
        self._field = env.current
        self._dt = scenario.epoch_dt
        self._gain = scenario.growth_gain
        self._seed = scenario.seed
        self._states: list[tuple[Obstacle, ...]] = [env.obstacles]
        self._realized: dict[int, tuple[RealizedObstacle, ...]] = {}
        self.dynamic = env.dynamic

    def obstacles_at(self, epoch: int) -> tuple[Obstacle, ...]:
        while len(self._states) <= epoch:
            self._states.append(
                advance_obstacles(
                    self._states[-1], self._field, self._dt, growth_gain=self._gain
                )
            )
        return self._states[epoch]

    def realized_at(self, epoch: int) -> tuple[RealizedObstacle, ...]:
        cached = self._realized.get(epoch)
        if cached is None:
            cached = realize_obstacles(self.obstacles_at(epoch), epoch, self._seed)
            self._realized[epoch] = cached
        return cached


def gene_bounds(scenario: Scenario) -> np.ndarray:
    """Per-gene [low, high] box for the free control points.

    The box spans start and goal on each axis, inflated by a margin
    proportional to the start-goal distance, and is tiled across the free
    points (genes are interleaved x, y, z per point).
    """
    start = np.asarray(scenario.start, dtype=float)
    goal = np.asarray(scenario.goal, dtype=float)
    margin = scenario.spline.bounds_margin * float(np.linalg.norm(goal - start))
    lo = np.minimum(start, goal) - margin
    hi = np.maximum(start, goal) + margin
    return np.tile(np.column_stack([lo, hi]), (scenario.spline.n_free, 1))


class PlannerObjective:
    """Scores gene vectors; the blending matrix is computed once."""

    def __init__(self, scenario: Scenario, env: Environment):
        self.scenario = scenario
        self.env = env
        self.epochs = EpochEnvironment(env, scenario)
        n_points = scenario.spline.n_free + 2
        self._ts = np.linspace(0.0, 1.0, scenario.spline.samples)
        self._basis = basis_matrix(n_points, scenario.spline.order, self._ts)
        self._start = np.asarray(scenario.start, dtype=float)
        self._goal = np.asarray(scenario.goal, dtype=float)

    def polygon(self, genes: np.ndarray) -> ControlPolygon:
        return ControlPolygon.from_free_points(
            self._start, self._goal, np.asarray(genes, dtype=float).reshape(-1, 3)
        )

    def trajectory(self, genes: np.ndarray) -> Trajectory:
        points = np.vstack(
            [self._start, np.asarray(genes, dtype=float).reshape(-1, 3), self._goal]
        )
        return trajectory_from_samples(self._ts, self._basis @ points)

    def breakdown(self, genes: np.ndarray, epoch: int) -> CostBreakdown:
        return total_cost(
            self.trajectory(genes),
            self.scenario.speed,
            self.env.current,
            self.env.gmap,
            self.epochs.realized_at(epoch),
            self.env.limits,
            self.scenario.weights,
            self.scenario.time_mode,
        )

    def __call__(self, genes: np.ndarray, epoch: int) -> float:
        return self.breakdown(genes, epoch).total

    def describe(self, genes: np.ndarray, epoch: int) -> dict[str, float]:
        return self.breakdown(genes, epoch).as_row()


@dataclass(frozen=True)
class PlanResult:
    trajectory: Trajectory
    breakdown: CostBreakdown
    trace: de.ConvergenceTrace
    best_genes: np.ndarray
    environment: Environment
    final_obstacles: tuple[RealizedObstacle, ...]

    @property
    def feasible(self) -> bool:
        return self.breakdown.feasible


def plan(scenario: Scenario) -> PlanResult:
    """Run the optimizer on a scenario and score the winning trajectory.

    The returned breakdown is evaluated under the final epoch's obstacle
    realization; ``feasible`` reports whether that trajectory is
    violation-free there.
    """
    env = build_environment(scenario)
    objective = PlannerObjective(scenario, env)
    result = de.run(
        scenario.de,
        objective,
        gene_bounds(scenario),
        dynamic=objective.epochs.dynamic,
        describe=objective.describe,
    )
    final_epoch = scenario.de.iter_max
    breakdown = objective.breakdown(result.best_genes, final_epoch)
    return PlanResult(
        trajectory=objective.trajectory(result.best_genes),
        breakdown=breakdown,
        trace=result.trace,
        best_genes=result.best_genes,
        environment=env,
        final_obstacles=objective.epochs.realized_at(final_epoch),
    )


def write_summary(path, scenario: Scenario, result: PlanResult, wall_time: float) -> None:
    summary = {
        "scenario": scenario.name,
        "seed": scenario.seed,
        "feasible": result.feasible,
        "best_cost": result.breakdown.total,
        "travel_time": result.breakdown.travel_time,
        "path_length": result.trajectory.length(),
        "collision_indicator": result.breakdown.collision_indicator,
        "collision_fraction": result.breakdown.collision_fraction,
        "violations": result.breakdown.violations,
        "unnavigable_segments": result.breakdown.unnavigable_segments,
        "generations": scenario.de.iter_max,
        "donor_mode": scenario.de.donor_mode,
        "time_mode": scenario.time_mode,
        "wall_time_s": round(wall_time, 3),
    }
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
