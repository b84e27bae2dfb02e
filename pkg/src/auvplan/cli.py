"""Command-line runner: seeded scenario in, CSV/JSON/SVG artifacts out.

Exit codes: 0 when the best trajectory is collision-free and within
limits, 2 when the iteration budget ends with an infeasible best, 1 on
any error.  That split makes seed sweeps scriptable.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .planner import plan, write_summary
from .render import render_convergence, render_scene
from .scenario import ScenarioError, apply_overrides, load_scenario
from .spline import write_trajectory_csv

EXIT_FEASIBLE = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="auvplan",
        description="Time-optimal AUV path planning over B-spline trajectories",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="run the planner on a scenario file")
    p.add_argument("scenario", help="path to a scenario YAML file")
    p.add_argument("--seed", type=int, default=None, help="override the run seed")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--iters", type=int, default=None, help="override iteration budget")
    p.add_argument("--time-mode", choices=["literal", "current"], default=None,
                   help="travel-time model")
    p.add_argument("--donor", choices=["weighted", "rand1"], default=None,
                   help="mutation donor mode")
    p.add_argument("--render", action="store_true",
                   help="also write scene.svg and convergence.svg")
    return parser


def _run_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    scenario = apply_overrides(
        scenario,
        seed=args.seed,
        iters=args.iters,
        time_mode=args.time_mode,
        donor=args.donor,
        out_dir=args.out,
    )
    out_dir = scenario.out_dir or "out"
    os.makedirs(out_dir, exist_ok=True)

    started = time.perf_counter()
    result = plan(scenario)
    wall = time.perf_counter() - started

    write_trajectory_csv(result.trajectory, os.path.join(out_dir, "trajectory.csv"))
    result.trace.write_csv(os.path.join(out_dir, "convergence.csv"))
    write_summary(os.path.join(out_dir, "summary.json"), scenario, result, wall)
    if args.render:
        rings = [ob.radius_bounds[1] for ob in result.environment.obstacles]
        render_scene(
            result.environment.gmap,
            result.environment.current,
            result.final_obstacles,
            result.trajectory,
            scenario.start,
            scenario.goal,
            os.path.join(out_dir, "scene.svg"),
            uncertainty_radii=rings,
            title=scenario.name,
        )
        render_convergence(
            result.trace, os.path.join(out_dir, "convergence.svg"), title=scenario.name
        )

    b = result.breakdown
    status = "feasible" if result.feasible else "INFEASIBLE"
    print(
        f"{scenario.name} seed={scenario.seed}: {status}  "
        f"cost={b.total:.3f}  T={b.travel_time:.3f}s  "
        f"length={result.trajectory.length():.1f}m  "
        f"collision={b.collision_fraction:.4f}  wall={wall:.2f}s"
    )
    print(f"artifacts written to {out_dir}/")
    return EXIT_FEASIBLE if result.feasible else EXIT_INFEASIBLE


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "plan":
            return _run_plan(args)
        raise AssertionError(f"unhandled command {args.command!r}")
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def console_main() -> None:
    raise SystemExit(main())
