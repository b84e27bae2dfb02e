import json
import time

import numpy as np
import pytest
import yaml

from auvplan import cli
from auvplan.env import CurrentField, GridMap, LambVortex, RealizedObstacle, write_pgm
from auvplan.render import render_convergence, render_scene
from auvplan.scenario import load_scenario
from auvplan.planner import plan
from auvplan.spline import trajectory_from_samples


@pytest.fixture
def small_scenario(tmp_path):
    raster = np.full((50, 50), 210, dtype=np.uint8)
    raster[20:26, 20:26] = 30  # island mid-map
    write_pgm(tmp_path / "isle.pgm", raster)
    doc = {
        "name": "small",
        "seed": 4,
        "map": {"pgm": "isle.pgm"},
        "start": [60.0, 60.0, 30.0],
        "goal": [440.0, 440.0, 30.0],
        "current": {
            "background": [0.1, 0.05],
            "vortices": [{"center": [150.0, 330.0], "circulation": 250.0, "core_radius": 80.0}],
        },
        "obstacles": {
            "list": [{"kind": "static", "center": [330.0, 160.0, 30.0], "base_radius": 35.0,
                      "radius_sigma": 8.0, "radius_bounds": [35.0, 60.0]}],
        },
        "weights": {"collision": 400.0},
        "de": {"n_pop": 24, "iter_max": 25},
    }
    path = tmp_path / "small.yaml"
    path.write_text(yaml.safe_dump(doc))
    return path


def read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


def strip_wall_time(raw: bytes) -> bytes:
    return b"\n".join(
        line for line in raw.splitlines() if b"wall_time_s" not in line
    )


class TestPlanCommand:
    def test_feasible_run_writes_artifacts(self, small_scenario, tmp_path):
        out = tmp_path / "run"
        code = cli.main(["plan", str(small_scenario), "--out", str(out), "--render"])
        assert code == cli.EXIT_FEASIBLE
        for name in ("trajectory.csv", "convergence.csv", "summary.json",
                     "scene.svg", "convergence.svg"):
            assert (out / name).is_file(), name
        summary = json.loads((out / "summary.json").read_text())
        assert summary["feasible"] is True
        assert summary["seed"] == 4
        assert summary["generations"] == 25
        traj_lines = (out / "trajectory.csv").read_text().strip().splitlines()
        assert len(traj_lines) == 201  # header + samples
        conv_lines = (out / "convergence.csv").read_text().strip().splitlines()
        assert len(conv_lines) == 27  # header + initial row + 25 generations

    def test_byte_identical_reruns(self, small_scenario, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert cli.main(["plan", str(small_scenario), "--out", str(out_a),
                         "--seed", "9", "--render"]) == 0
        assert cli.main(["plan", str(small_scenario), "--out", str(out_b),
                         "--seed", "9", "--render"]) == 0
        for name in ("trajectory.csv", "convergence.csv", "scene.svg", "convergence.svg"):
            assert read_bytes(out_a / name) == read_bytes(out_b / name), name
        assert strip_wall_time(read_bytes(out_a / "summary.json")) == strip_wall_time(
            read_bytes(out_b / "summary.json")
        )

    def test_seed_override_changes_outputs(self, small_scenario, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        cli.main(["plan", str(small_scenario), "--out", str(out_a), "--seed", "1"])
        cli.main(["plan", str(small_scenario), "--out", str(out_b), "--seed", "2"])
        assert read_bytes(out_a / "trajectory.csv") != read_bytes(out_b / "trajectory.csv")

    def test_iters_and_mode_overrides_reach_summary(self, small_scenario, tmp_path):
        out = tmp_path / "o"
        cli.main(["plan", str(small_scenario), "--out", str(out), "--iters", "8",
                  "--time-mode", "current", "--donor", "rand1"])
        summary = json.loads((out / "summary.json").read_text())
        assert summary["generations"] == 8
        assert summary["time_mode"] == "current"
        assert summary["donor_mode"] == "rand1"

    def test_infeasible_exit_code(self, tmp_path):
        raster = np.full((40, 40), 210, dtype=np.uint8)
        raster[:, 18:20] = 25  # sealed wall
        write_pgm(tmp_path / "wall.pgm", raster)
        doc = {
            "map": {"pgm": "wall.pgm"},
            "start": [50.0, 200.0, 20.0],
            "goal": [350.0, 200.0, 20.0],
            "de": {"n_pop": 16, "iter_max": 8},
        }
        path = tmp_path / "sealed.yaml"
        path.write_text(yaml.safe_dump(doc))
        code = cli.main(["plan", str(path), "--out", str(tmp_path / "o")])
        assert code == cli.EXIT_INFEASIBLE

    def test_missing_scenario_is_error(self, tmp_path):
        assert cli.main(["plan", str(tmp_path / "nope.yaml")]) == cli.EXIT_ERROR

    def test_invalid_scenario_is_error(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("map: {}\nstart: [0,0,0]\ngoal: [1,1,1]\n")
        assert cli.main(["plan", str(path)]) == cli.EXIT_ERROR

    def test_scenario_out_dir_used_without_flag(self, small_scenario, tmp_path):
        doc = yaml.safe_load(small_scenario.read_text())
        doc["out_dir"] = str(tmp_path / "from_scenario")
        doc["de"]["iter_max"] = 2
        small_scenario.write_text(yaml.safe_dump(doc))
        cli.main(["plan", str(small_scenario)])
        assert (tmp_path / "from_scenario" / "summary.json").is_file()


class TestRender:
    @staticmethod
    def scene_pieces():
        gmap = GridMap(np.zeros((40, 40), dtype=bool), cell_size=10.0)
        positions = np.column_stack([
            np.linspace(30, 370, 50), np.linspace(40, 360, 50), np.full(50, 20.0),
        ])
        traj = trajectory_from_samples(np.linspace(0, 1, 50), positions)
        obstacles = (RealizedObstacle((200.0, 180.0, 20.0), 30.0),)
        return gmap, traj, obstacles

    def test_zero_current_draws_no_arrows(self, tmp_path):
        gmap, traj, obstacles = self.scene_pieces()
        info = render_scene(gmap, CurrentField(), obstacles, traj, (30, 40), (370, 360),
                            tmp_path / "zero.svg", uncertainty_radii=[60.0])
        assert info.arrows == 0
        svg = (tmp_path / "zero.svg").read_text()
        assert "current-arrows" not in svg
        assert "path" in svg and "obstacle-0" in svg and "obstacle-ring-0" in svg

    def test_current_draws_colored_arrows(self, tmp_path):
        gmap, traj, obstacles = self.scene_pieces()
        fld = CurrentField(vortices=(LambVortex((200.0, 200.0), 400.0, 90.0),))
        info = render_scene(gmap, fld, obstacles, traj, (30, 40), (370, 360),
                            tmp_path / "flow.svg")
        assert info.arrows > 0
        assert "current-arrows" in (tmp_path / "flow.svg").read_text()

    def test_arrows_decimated_to_blocks(self, tmp_path):
        gmap, traj, obstacles = self.scene_pieces()
        fld = CurrentField(background=(0.4, 0.0))
        info = render_scene(gmap, fld, obstacles, None, (30, 40), (370, 360),
                            tmp_path / "q.svg", quiver_block=8)
        assert info.arrows == 25  # 40/8 = 5 per axis

    def test_byte_identical(self, tmp_path):
        gmap, traj, obstacles = self.scene_pieces()
        fld = CurrentField(vortices=(LambVortex((150.0, 250.0), 300.0, 70.0),),
                           background=(0.1, -0.2))
        render_scene(gmap, fld, obstacles, traj, (30, 40), (370, 360), tmp_path / "a.svg",
                     uncertainty_radii=[55.0])
        render_scene(gmap, fld, obstacles, traj, (30, 40), (370, 360), tmp_path / "b.svg",
                     uncertainty_radii=[55.0])
        assert read_bytes(tmp_path / "a.svg") == read_bytes(tmp_path / "b.svg")

    def test_reference_scale_render_budget(self, tmp_path):
        rng = np.random.default_rng(1)
        gmap = GridMap(rng.random((250, 250)) < 0.25, cell_size=10.0)
        fld = CurrentField(
            vortices=tuple(
                LambVortex(tuple(rng.uniform(0, 2500, 2)), float(rng.uniform(-800, 800)),
                           float(rng.uniform(100, 250)))
                for _ in range(10)
            ),
            background=(0.1, 0.1),
        )
        positions = np.column_stack([
            np.linspace(100, 2400, 200), np.linspace(150, 2300, 200), np.full(200, 50.0),
        ])
        traj = trajectory_from_samples(np.linspace(0, 1, 200), positions)
        obstacles = tuple(
            RealizedObstacle(tuple(rng.uniform(300, 2200, 3)), float(rng.uniform(40, 140)))
            for _ in range(6)
        )
        started = time.perf_counter()
        info = render_scene(gmap, fld, obstacles, traj, (100, 150), (2400, 2300),
                            tmp_path / "big.svg", uncertainty_radii=[150.0] * 6)
        elapsed = time.perf_counter() - started
        assert elapsed < 1.0
        assert info.bytes_written < 2_000_000

    def test_convergence_figure(self, small_scenario, tmp_path):
        sc = load_scenario(small_scenario)
        result = plan(sc)
        size = render_convergence(result.trace, tmp_path / "conv.svg", title="small")
        assert size > 0
        assert (tmp_path / "conv.svg").is_file()
