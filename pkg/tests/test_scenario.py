import math

import numpy as np
import pytest
import yaml

from auvplan.env import ObstacleKind, write_pgm
from auvplan.scenario import (
    Scenario,
    ScenarioError,
    apply_overrides,
    build_environment,
    load_scenario,
    parse_scenario,
    save_scenario,
    scenario_to_dict,
)


@pytest.fixture
def water_pgm(tmp_path):
    path = tmp_path / "water.pgm"
    raster = np.full((40, 40), 220, dtype=np.uint8)
    raster[:6, :] = 30  # land strip along low y
    write_pgm(path, raster)
    return path


def minimal_doc(water_pgm):
    return {
        "map": {"pgm": water_pgm.name},
        "start": [50.0, 150.0, 20.0],
        "goal": [350.0, 350.0, 20.0],
    }


class TestParsing:
    def test_minimal_file_gets_documented_defaults(self, tmp_path, water_pgm):
        path = tmp_path / "s.yaml"
        path.write_text(yaml.safe_dump(minimal_doc(water_pgm)))
        sc = load_scenario(path)
        assert sc.speed == 3.0
        assert sc.spline.n_free == 5 and sc.spline.order == 3 and sc.spline.samples == 200
        assert sc.de.n_pop == 100 and sc.de.iter_max == 200
        assert sc.de.f_bounds == (0.2, 0.8) and sc.de.cr == 0.2
        assert sc.de.donor_mode == "weighted"
        assert sc.limits.z_max == 1000.0 and sc.limits.u_max is None
        assert sc.weights.q == 100.0
        assert sc.time_mode == "literal"
        assert sc.map.cell_size == 10.0

    def test_unknown_key_rejected_with_path(self, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["vehicle"] = {"speed": 3.0, "thrst": 9}
        with pytest.raises(ScenarioError, match="vehicle.*thrst"):
            parse_scenario(doc, base_dir=str(water_pgm.parent))

    def test_unknown_nested_key(self, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["de"] = {"n_pop": 50, "mutation_rate": 0.4}
        with pytest.raises(ScenarioError, match="mutation_rate"):
            parse_scenario(doc, base_dir=str(water_pgm.parent))

    def test_missing_required_key(self, water_pgm):
        doc = minimal_doc(water_pgm)
        del doc["goal"]
        with pytest.raises(ScenarioError, match="goal"):
            parse_scenario(doc, base_dir=str(water_pgm.parent))

    def test_map_source_exactly_one(self, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["map"]["synthetic"] = {"width": 10, "height": 10}
        with pytest.raises(ScenarioError, match="exactly one"):
            parse_scenario(doc, base_dir=str(water_pgm.parent))
        del doc["map"]["pgm"]
        del doc["map"]["synthetic"]
        with pytest.raises(ScenarioError, match="exactly one"):
            parse_scenario(doc, base_dir=str(water_pgm.parent))

    def test_missing_pgm_file(self, tmp_path):
        doc = {"map": {"pgm": "nowhere.pgm"}, "start": [0, 0, 0], "goal": [1, 1, 1]}
        with pytest.raises(ScenarioError, match="not found"):
            parse_scenario(doc, base_dir=str(tmp_path))

    def test_bad_time_mode_and_donor(self, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["time_mode"] = "fast"
        with pytest.raises(ScenarioError, match="time_mode"):
            parse_scenario(doc, base_dir=str(water_pgm.parent))
        doc = minimal_doc(water_pgm)
        doc["de"] = {"donor": "best2"}
        with pytest.raises(ScenarioError, match="donor"):
            parse_scenario(doc, base_dir=str(water_pgm.parent))

    def test_static_obstacle_with_velocity_rejected(self, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["obstacles"] = {
            "list": [{"kind": "static", "center": [10, 10, 10], "base_radius": 5,
                      "velocity": [1, 0]}]
        }
        with pytest.raises(ScenarioError, match="static"):
            parse_scenario(doc, base_dir=str(water_pgm.parent))

    def test_obstacle_defaults(self, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["obstacles"] = {
            "list": [{"kind": "moving", "center": [100, 200, 20], "base_radius": 30,
                      "velocity": [0.2, -0.1], "current_coupled": True}]
        }
        sc = parse_scenario(doc, base_dir=str(water_pgm.parent))
        (ob,) = sc.obstacles.explicit
        assert ob.kind is ObstacleKind.MOVING
        assert ob.radius_sigma == 20.0
        assert ob.radius_bounds == (30.0, 70.0)  # base to base + 2 sigma

    def test_start_on_land_names_field(self, tmp_path, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["start"] = [50.0, 20.0, 10.0]  # inside the land strip
        path = tmp_path / "bad.yaml"
        path.write_text(yaml.safe_dump(doc))
        with pytest.raises(ScenarioError, match="start"):
            load_scenario(path)

    def test_goal_on_land_names_field(self, tmp_path, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["goal"] = [350.0, 30.0, 10.0]
        path = tmp_path / "bad.yaml"
        path.write_text(yaml.safe_dump(doc))
        with pytest.raises(ScenarioError, match="goal"):
            load_scenario(path)

    def test_yaml_syntax_error(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("map: [unclosed\n")
        with pytest.raises(ScenarioError, match="parse"):
            load_scenario(path)


class TestRoundTrip:
    def test_serialize_reparses_equal(self, tmp_path, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["current"] = {
            "background": [0.1, -0.2],
            "vortices": [{"center": [100, 120], "circulation": -300, "core_radius": 60}],
            "random_vortices": {"count": 3, "seed": 4},
        }
        doc["obstacles"] = {
            "list": [{"kind": "moving", "center": [120, 160, 20], "base_radius": 25,
                      "velocity": [0.1, 0.2]}],
            "random": {"count": 2, "seed": 9},
        }
        doc["weights"] = {"collision": 400.0}
        doc["seed"] = 17
        first = parse_scenario(doc, base_dir=str(water_pgm.parent))
        out = tmp_path / "round.yaml"
        save_scenario(first, out)
        second = load_scenario(out, validate_environment=False)
        assert first == second

    def test_reference_scenario_round_trips(self, tmp_path):
        first = load_scenario("scenarios/reference.yaml", validate_environment=False)
        out = tmp_path / "ref.yaml"
        save_scenario(first, out)
        assert load_scenario(out, validate_environment=False) == first

    def test_dict_form_is_yaml_safe(self, water_pgm):
        sc = parse_scenario(minimal_doc(water_pgm), base_dir=str(water_pgm.parent))
        dumped = yaml.safe_dump(scenario_to_dict(sc))
        assert "auvplan" not in dumped  # plain data only, no python tags


class TestOverrides:
    def test_seed_iters_and_render_flags(self, water_pgm):
        sc = parse_scenario(minimal_doc(water_pgm), base_dir=str(water_pgm.parent))
        out = apply_overrides(sc, seed=42, iters=17, time_mode="current",
                              donor="rand1", out_dir="elsewhere")
        assert out.de.seed == 42 and out.seed == 42
        assert out.de.iter_max == 17
        assert out.time_mode == "current"
        assert out.de.donor_mode == "rand1"
        assert out.out_dir == "elsewhere"
        # original untouched
        assert sc.de.iter_max == 200 and sc.out_dir is None

    def test_bad_override_values(self, water_pgm):
        sc = parse_scenario(minimal_doc(water_pgm), base_dir=str(water_pgm.parent))
        with pytest.raises(ScenarioError):
            apply_overrides(sc, iters=-1)
        with pytest.raises(ScenarioError):
            apply_overrides(sc, donor="other")


class TestEnvironmentBuild:
    def test_random_pieces_are_seed_stable(self, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["current"] = {"random_vortices": {"count": 4, "seed": 3}}
        doc["obstacles"] = {"random": {"count": 5, "seed": 8, "keepout": 40.0}}
        sc = parse_scenario(doc, base_dir=str(water_pgm.parent))
        env_a = build_environment(sc)
        env_b = build_environment(sc)
        assert env_a.current.vortices == env_b.current.vortices
        assert env_a.obstacles == env_b.obstacles
        assert len(env_a.current.vortices) == 4
        assert len(env_a.obstacles) == 5

    def test_mixed_obstacles_alternate_kinds(self, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["obstacles"] = {"random": {"count": 6, "seed": 1, "keepout": 40.0}}
        sc = parse_scenario(doc, base_dir=str(water_pgm.parent))
        env = build_environment(sc)
        kinds = [ob.kind for ob in env.obstacles]
        assert kinds.count(ObstacleKind.STATIC) == 3
        assert kinds.count(ObstacleKind.MOVING) == 3

    def test_keepout_respected(self, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["obstacles"] = {"random": {"count": 8, "seed": 2, "keepout": 60.0}}
        sc = parse_scenario(doc, base_dir=str(water_pgm.parent))
        env = build_environment(sc)
        for ob in env.obstacles:
            assert math.hypot(ob.center[0] - 50, ob.center[1] - 150) >= 60.0
            assert math.hypot(ob.center[0] - 350, ob.center[1] - 350) >= 60.0

    def test_derived_velocity_limits(self, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["current"] = {"background": [0.6, 0.8]}  # magnitude 1.0 everywhere
        sc = parse_scenario(doc, base_dir=str(water_pgm.parent))
        env = build_environment(sc)
        assert env.limits.u_max == pytest.approx(4.0)
        assert env.limits.v_max == pytest.approx(4.0)

    def test_explicit_limits_kept(self, water_pgm):
        doc = minimal_doc(water_pgm)
        doc["limits"] = {"u_max": 9.0, "v_max": 2.0}
        sc = parse_scenario(doc, base_dir=str(water_pgm.parent))
        env = build_environment(sc)
        assert env.limits.u_max == 9.0 and env.limits.v_max == 2.0

    def test_dynamic_flag(self, water_pgm):
        doc = minimal_doc(water_pgm)
        sc = parse_scenario(doc, base_dir=str(water_pgm.parent))
        assert not build_environment(sc).dynamic
        doc["obstacles"] = {"list": [{"kind": "static", "center": [100, 200, 10],
                                      "base_radius": 10, "radius_sigma": 5.0}]}
        sc = parse_scenario(doc, base_dir=str(water_pgm.parent))
        assert build_environment(sc).dynamic
