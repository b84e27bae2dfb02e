"""Scenario files: everything a planning run needs, in one YAML document.

The schema is strict: unknown keys are rejected at every nesting level so
a typo cannot silently fall back to a default.  A scenario declares the
map source (PGM raster or synthetic generator), the current field
(explicit and/or randomly placed vortices), the obstacle population
(explicit and/or randomly placed along the start-goal corridor), vehicle
and spline settings, constraint limits, penalty weights, and the
optimizer configuration.  Randomly generated environment pieces carry
their own seeds inside the scenario, so the run seed sweeps the optimizer
against a fixed world.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np
import yaml

from .cost import ConstraintLimits, PenaltyWeights
from .de import DEConfig
from .env.currents import CurrentField, LambVortex, current_magnitude_stats
from .env.gridmap import GridMap, cluster_map, read_pgm, synthetic_raster
from .env.obstacles import Obstacle, ObstacleKind
from .rng import DOMAIN_PLACEMENT, DOMAIN_VORTEX, substream


class ScenarioError(ValueError):
    """Scenario file could not be parsed or validated."""


_MISSING = object()


class _Node:
    """Cursor over one mapping of the scenario tree; rejects leftovers."""

    def __init__(self, data: Any, path: str):
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ScenarioError(f"{path}: expected a mapping, got {type(data).__name__}")
        self._data = dict(data)
        self.path = path

    def take(self, key: str, default: Any = _MISSING) -> Any:
        if key in self._data:
            return self._data.pop(key)
        if default is _MISSING:
            raise ScenarioError(f"{self.path}: missing required key '{key}'")
        return default

    def child(self, key: str, *, required: bool = False) -> "_Node | None":
        raw = self.take(key, _MISSING if required else None)
        if raw is None and not required:
            return None
        return _Node(raw, f"{self.path}.{key}")

    def finish(self) -> None:
        if self._data:
            names = ", ".join(sorted(self._data))
            raise ScenarioError(f"{self.path}: unknown key(s): {names}")


def _number(value: Any, path: str, *, minimum: float | None = None,
            positive: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{path}: expected a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ScenarioError(f"{path}: must be finite")
    if positive and v <= 0:
        raise ScenarioError(f"{path}: must be > 0")
    if minimum is not None and v < minimum:
        raise ScenarioError(f"{path}: must be >= {minimum}")
    return v


def _integer(value: Any, path: str, *, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{path}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ScenarioError(f"{path}: must be >= {minimum}")
    return value


def _vector(value: Any, path: str, size: int) -> tuple[float, ...]:
    if not isinstance(value, (list, tuple)) or len(value) != size:
        raise ScenarioError(f"{path}: expected a list of {size} numbers")
    return tuple(_number(v, f"{path}[{i}]") for i, v in enumerate(value))


def _range_pair(value: Any, path: str, *, positive: bool = False) -> tuple[float, float]:
    lo, hi = _vector(value, path, 2)
    if lo > hi:
        raise ScenarioError(f"{path}: low bound exceeds high bound")
    if positive and lo <= 0:
        raise ScenarioError(f"{path}: bounds must be > 0")
    return lo, hi


# --------------------------------------------------------------------------
# schema dataclasses


@dataclass(frozen=True)
class SyntheticMapSpec:
    width: int = 250
    height: int = 250
    n_blobs: int = 8
    radius_cells: tuple[float, float] = (10.0, 30.0)
    seed: int = 0


@dataclass(frozen=True)
class MapSpec:
    pgm: str | None = None
    synthetic: SyntheticMapSpec | None = None
    cell_size: float = 10.0
    origin: tuple[float, float] = (0.0, 0.0)
    cluster_k: int = 2
    cluster_max_iters: int = 50
    cluster_seed: int = 0


@dataclass(frozen=True)
class RandomVortexSpec:
    count: int
    circulation: tuple[float, float] = (200.0, 800.0)  # magnitude range, sign random
    core_radius: tuple[float, float] = (80.0, 250.0)
    seed: int = 0


@dataclass(frozen=True)
class CurrentSpec:
    background: tuple[float, float] = (0.0, 0.0)
    vortices: tuple[LambVortex, ...] = ()
    random: RandomVortexSpec | None = None


@dataclass(frozen=True)
class RandomObstacleSpec:
    count: int
    kind: str = "mixed"  # mixed | static | moving
    base_radius: tuple[float, float] = (40.0, 80.0)
    radius_sigma: float = 20.0
    bound_margin: float = 60.0   # radius_bounds = [base, base + margin]
    speed: tuple[float, float] = (0.1, 0.4)
    corridor_fraction: float = 0.25  # cross-track half-width / start-goal distance
    keepout: float = 250.0           # min center distance from the endpoints
    seed: int = 0


@dataclass(frozen=True)
class ObstacleSpec:
    explicit: tuple[Obstacle, ...] = ()
    random: RandomObstacleSpec | None = None


@dataclass(frozen=True)
class SplineSpec:
    n_free: int = 5
    order: int = 3
    samples: int = 200
    bounds_margin: float = 0.25


@dataclass(frozen=True)
class LimitSpec:
    z_min: float = 0.0
    z_max: float = 1000.0
    u_max: float | None = None   # None: derived as speed + max current magnitude
    v_max: float | None = None
    theta_max: float = math.pi / 4
    yaw_rate_max: float = 0.5


@dataclass(frozen=True)
class Scenario:
    map: MapSpec
    start: tuple[float, float, float]
    goal: tuple[float, float, float]
    name: str = "scenario"
    seed: int = 0
    speed: float = 3.0
    current: CurrentSpec = field(default_factory=CurrentSpec)
    obstacles: ObstacleSpec = field(default_factory=ObstacleSpec)
    spline: SplineSpec = field(default_factory=SplineSpec)
    limits: LimitSpec = field(default_factory=LimitSpec)
    weights: PenaltyWeights = field(default_factory=PenaltyWeights)
    de: DEConfig = field(default_factory=DEConfig)
    time_mode: str = "literal"
    epoch_dt: float = 1.0
    growth_gain: float = 0.05
    out_dir: str | None = None


# --------------------------------------------------------------------------
# parsing


def _parse_map(node: _Node, base_dir: str) -> MapSpec:
    pgm = node.take("pgm", None)
    if pgm is not None:
        if not isinstance(pgm, str):
            raise ScenarioError(f"{node.path}.pgm: expected a file path string")
        pgm = os.path.normpath(os.path.join(base_dir, pgm))
        if not os.path.isfile(pgm):
            raise ScenarioError(f"{node.path}.pgm: file not found: {pgm}")
    synth = None
    synth_node = node.child("synthetic")
    if synth_node is not None:
        synth = SyntheticMapSpec(
            width=_integer(synth_node.take("width", 250), f"{synth_node.path}.width", minimum=1),
            height=_integer(synth_node.take("height", 250), f"{synth_node.path}.height", minimum=1),
            n_blobs=_integer(synth_node.take("n_blobs", 8), f"{synth_node.path}.n_blobs", minimum=0),
            radius_cells=_range_pair(
                synth_node.take("radius_cells", [10.0, 30.0]),
                f"{synth_node.path}.radius_cells", positive=True),
            seed=_integer(synth_node.take("seed", 0), f"{synth_node.path}.seed"),
        )
        synth_node.finish()
    if (pgm is None) == (synth is None):
        raise ScenarioError(f"{node.path}: give exactly one of 'pgm' or 'synthetic'")
    cluster = node.child("cluster") or _Node({}, f"{node.path}.cluster")
    spec = MapSpec(
        pgm=pgm,
        synthetic=synth,
        cell_size=_number(node.take("cell_size", 10.0), f"{node.path}.cell_size", positive=True),
        origin=_vector(node.take("origin", [0.0, 0.0]), f"{node.path}.origin", 2),
        cluster_k=_integer(cluster.take("k", 2), f"{cluster.path}.k", minimum=1),
        cluster_max_iters=_integer(cluster.take("max_iters", 50), f"{cluster.path}.max_iters", minimum=1),
        cluster_seed=_integer(cluster.take("seed", 0), f"{cluster.path}.seed"),
    )
    cluster.finish()
    node.finish()
    return spec


def _parse_vortex(item: Any, path: str) -> LambVortex:
    node = _Node(item, path)
    vx = LambVortex(
        center=_vector(node.take("center"), f"{path}.center", 2),
        circulation=_number(node.take("circulation"), f"{path}.circulation"),
        core_radius=_number(node.take("core_radius"), f"{path}.core_radius", positive=True),
    )
    node.finish()
    return vx


def _parse_current(node: _Node | None, path: str) -> CurrentSpec:
    if node is None:
        return CurrentSpec()
    raw_vortices = node.take("vortices", [])
    if not isinstance(raw_vortices, list):
        raise ScenarioError(f"{path}.vortices: expected a list")
    vortices = tuple(
        _parse_vortex(item, f"{path}.vortices[{i}]") for i, item in enumerate(raw_vortices)
    )
    random_spec = None
    rnode = node.child("random_vortices")
    if rnode is not None:
        random_spec = RandomVortexSpec(
            count=_integer(rnode.take("count"), f"{rnode.path}.count", minimum=0),
            circulation=_range_pair(rnode.take("circulation", [200.0, 800.0]),
                                    f"{rnode.path}.circulation", positive=True),
            core_radius=_range_pair(rnode.take("core_radius", [80.0, 250.0]),
                                    f"{rnode.path}.core_radius", positive=True),
            seed=_integer(rnode.take("seed", 0), f"{rnode.path}.seed"),
        )
        rnode.finish()
    spec = CurrentSpec(
        background=_vector(node.take("background", [0.0, 0.0]), f"{path}.background", 2),
        vortices=vortices,
        random=random_spec,
    )
    node.finish()
    return spec


def _parse_obstacle(item: Any, path: str) -> Obstacle:
    node = _Node(item, path)
    kind_raw = node.take("kind", "static")
    try:
        kind = ObstacleKind(kind_raw)
    except ValueError:
        raise ScenarioError(f"{path}.kind: expected 'static' or 'moving', got {kind_raw!r}")
    base = _number(node.take("base_radius"), f"{path}.base_radius", positive=True)
    sigma = _number(node.take("radius_sigma", 20.0), f"{path}.radius_sigma", minimum=0.0)
    bounds = node.take("radius_bounds", None)
    if bounds is None:
        bounds = (base, base + 2.0 * sigma if sigma > 0 else base)
    else:
        bounds = _range_pair(bounds, f"{path}.radius_bounds", positive=True)
    ob = Obstacle(
        kind=kind,
        center=_vector(node.take("center"), f"{path}.center", 3),
        base_radius=base,
        radius_sigma=sigma,
        radius_bounds=bounds,
        velocity=_vector(node.take("velocity", [0.0, 0.0]), f"{path}.velocity", 2),
        current_coupled=bool(node.take("current_coupled", False)),
    )
    if ob.kind is ObstacleKind.STATIC and ob.velocity != (0.0, 0.0):
        raise ScenarioError(f"{path}: static obstacles cannot have a velocity")
    node.finish()
    return ob


def _parse_obstacles(node: _Node | None, path: str) -> ObstacleSpec:
    if node is None:
        return ObstacleSpec()
    raw_list = node.take("list", [])
    if not isinstance(raw_list, list):
        raise ScenarioError(f"{path}.list: expected a list")
    explicit = tuple(
        _parse_obstacle(item, f"{path}.list[{i}]") for i, item in enumerate(raw_list)
    )
    random_spec = None
    rnode = node.child("random")
    if rnode is not None:
        kind = rnode.take("kind", "mixed")
        if kind not in ("mixed", "static", "moving"):
            raise ScenarioError(f"{rnode.path}.kind: expected mixed|static|moving")
        random_spec = RandomObstacleSpec(
            count=_integer(rnode.take("count"), f"{rnode.path}.count", minimum=0),
            kind=kind,
            base_radius=_range_pair(rnode.take("base_radius", [40.0, 80.0]),
                                    f"{rnode.path}.base_radius", positive=True),
            radius_sigma=_number(rnode.take("radius_sigma", 20.0),
                                 f"{rnode.path}.radius_sigma", minimum=0.0),
            bound_margin=_number(rnode.take("bound_margin", 60.0),
                                 f"{rnode.path}.bound_margin", minimum=0.0),
            speed=_range_pair(rnode.take("speed", [0.1, 0.4]),
                              f"{rnode.path}.speed"),
            corridor_fraction=_number(rnode.take("corridor_fraction", 0.25),
                                      f"{rnode.path}.corridor_fraction", positive=True),
            keepout=_number(rnode.take("keepout", 250.0), f"{rnode.path}.keepout", minimum=0.0),
            seed=_integer(rnode.take("seed", 0), f"{rnode.path}.seed"),
        )
        rnode.finish()
    node.finish()
    return ObstacleSpec(explicit=explicit, random=random_spec)


def parse_scenario(data: Any, *, base_dir: str = ".") -> Scenario:
    """Build a validated Scenario from a parsed YAML tree."""
    root = _Node(data, "scenario")
    map_spec = _parse_map(root.child("map", required=True), base_dir)

    name = root.take("name", "scenario")
    if not isinstance(name, str) or not name:
        raise ScenarioError("scenario.name: expected a non-empty string")

    start = _vector(root.take("start"), "scenario.start", 3)
    goal = _vector(root.take("goal"), "scenario.goal", 3)

    vehicle = root.child("vehicle") or _Node({}, "scenario.vehicle")
    speed = _number(vehicle.take("speed", 3.0), "scenario.vehicle.speed", positive=True)
    vehicle.finish()

    current = _parse_current(root.child("current"), "scenario.current")
    obstacles = _parse_obstacles(root.child("obstacles"), "scenario.obstacles")

    snode = root.child("spline") or _Node({}, "scenario.spline")
    spline = SplineSpec(
        n_free=_integer(snode.take("n_free", 5), f"{snode.path}.n_free", minimum=1),
        order=_integer(snode.take("order", 3), f"{snode.path}.order", minimum=2),
        samples=_integer(snode.take("samples", 200), f"{snode.path}.samples", minimum=2),
        bounds_margin=_number(snode.take("bounds_margin", 0.25),
                              f"{snode.path}.bounds_margin", minimum=0.0),
    )
    snode.finish()
    if spline.n_free + 2 < spline.order:
        raise ScenarioError("scenario.spline: n_free + 2 control points must reach the order")

    lnode = root.child("limits") or _Node({}, "scenario.limits")
    u_max = lnode.take("u_max", None)
    v_max = lnode.take("v_max", None)
    limits = LimitSpec(
        z_min=_number(lnode.take("z_min", 0.0), f"{lnode.path}.z_min"),
        z_max=_number(lnode.take("z_max", 1000.0), f"{lnode.path}.z_max"),
        u_max=None if u_max is None else _number(u_max, f"{lnode.path}.u_max", positive=True),
        v_max=None if v_max is None else _number(v_max, f"{lnode.path}.v_max", positive=True),
        theta_max=_number(lnode.take("theta_max", math.pi / 4),
                          f"{lnode.path}.theta_max", positive=True),
        yaw_rate_max=_number(lnode.take("yaw_rate_max", 0.5),
                             f"{lnode.path}.yaw_rate_max", positive=True),
    )
    lnode.finish()
    if limits.z_min >= limits.z_max:
        raise ScenarioError("scenario.limits: z_min must be below z_max")

    wnode = root.child("weights") or _Node({}, "scenario.weights")
    try:
        weights = PenaltyWeights(
            q=_number(wnode.take("q", 100.0), f"{wnode.path}.q", minimum=0.0),
            z_under=_number(wnode.take("z_under", 1.0), f"{wnode.path}.z_under", minimum=0.0),
            z_over=_number(wnode.take("z_over", 1.0), f"{wnode.path}.z_over", minimum=0.0),
            surge=_number(wnode.take("surge", 1.0), f"{wnode.path}.surge", minimum=0.0),
            sway=_number(wnode.take("sway", 1.0), f"{wnode.path}.sway", minimum=0.0),
            pitch=_number(wnode.take("pitch", 1.0), f"{wnode.path}.pitch", minimum=0.0),
            yaw_rate=_number(wnode.take("yaw_rate", 1.0), f"{wnode.path}.yaw_rate", minimum=0.0),
            collision=_number(wnode.take("collision", 1.0), f"{wnode.path}.collision", minimum=0.0),
        )
    except ValueError as exc:
        raise ScenarioError(f"scenario.weights: {exc}")
    wnode.finish()

    dnode = root.child("de") or _Node({}, "scenario.de")
    donor = dnode.take("donor", "weighted")
    try:
        de_cfg = DEConfig(
            n_pop=_integer(dnode.take("n_pop", 100), f"{dnode.path}.n_pop", minimum=4),
            iter_max=_integer(dnode.take("iter_max", 200), f"{dnode.path}.iter_max", minimum=0),
            f_bounds=_range_pair(dnode.take("f_bounds", [0.2, 0.8]),
                                 f"{dnode.path}.f_bounds"),
            cr=_number(dnode.take("cr", 0.2), f"{dnode.path}.cr", minimum=0.0),
            seed=_integer(root.take("seed", 0), "scenario.seed"),
            donor_mode=donor,
        )
    except ValueError as exc:
        raise ScenarioError(f"scenario.de: {exc}")
    dnode.finish()

    time_mode = root.take("time_mode", "literal")
    if time_mode not in ("literal", "current"):
        raise ScenarioError("scenario.time_mode: expected 'literal' or 'current'")

    out_dir = root.take("out_dir", None)
    if out_dir is not None and not isinstance(out_dir, str):
        raise ScenarioError("scenario.out_dir: expected a path string")

    scenario = Scenario(
        map=map_spec,
        start=start,
        goal=goal,
        name=name,
        seed=de_cfg.seed,
        speed=speed,
        current=current,
        obstacles=obstacles,
        spline=spline,
        limits=limits,
        weights=weights,
        de=de_cfg,
        time_mode=time_mode,
        epoch_dt=_number(root.take("epoch_dt", 1.0), "scenario.epoch_dt", positive=True),
        growth_gain=_number(root.take("growth_gain", 0.05), "scenario.growth_gain", minimum=0.0),
        out_dir=out_dir,
    )
    root.finish()
    return scenario


# --------------------------------------------------------------------------
# serialization (round-trips through parse_scenario)


def scenario_to_dict(s: Scenario) -> dict:
    data: dict[str, Any] = {
        "name": s.name,
        "seed": s.seed,
        "map": {
            "cell_size": s.map.cell_size,
            "origin": list(s.map.origin),
            "cluster": {
                "k": s.map.cluster_k,
                "max_iters": s.map.cluster_max_iters,
                "seed": s.map.cluster_seed,
            },
        },
        "start": list(s.start),
        "goal": list(s.goal),
        "vehicle": {"speed": s.speed},
        "current": {
            "background": list(s.current.background),
            "vortices": [
                {
                    "center": list(v.center),
                    "circulation": v.circulation,
                    "core_radius": v.core_radius,
                }
                for v in s.current.vortices
            ],
        },
        "obstacles": {
            "list": [
                {
                    "kind": ob.kind.value,
                    "center": list(ob.center),
                    "base_radius": ob.base_radius,
                    "radius_sigma": ob.radius_sigma,
                    "radius_bounds": list(ob.radius_bounds),
                    "velocity": list(ob.velocity),
                    "current_coupled": ob.current_coupled,
                }
                for ob in s.obstacles.explicit
            ],
        },
        "spline": {
            "n_free": s.spline.n_free,
            "order": s.spline.order,
            "samples": s.spline.samples,
            "bounds_margin": s.spline.bounds_margin,
        },
        "limits": {
            "z_min": s.limits.z_min,
            "z_max": s.limits.z_max,
            "u_max": s.limits.u_max,
            "v_max": s.limits.v_max,
            "theta_max": s.limits.theta_max,
            "yaw_rate_max": s.limits.yaw_rate_max,
        },
        "weights": {
            "q": s.weights.q,
            "z_under": s.weights.z_under,
            "z_over": s.weights.z_over,
            "surge": s.weights.surge,
            "sway": s.weights.sway,
            "pitch": s.weights.pitch,
            "yaw_rate": s.weights.yaw_rate,
            "collision": s.weights.collision,
        },
        "de": {
            "n_pop": s.de.n_pop,
            "iter_max": s.de.iter_max,
            "f_bounds": list(s.de.f_bounds),
            "cr": s.de.cr,
            "donor": s.de.donor_mode,
        },
        "time_mode": s.time_mode,
        "epoch_dt": s.epoch_dt,
        "growth_gain": s.growth_gain,
    }
    if s.map.pgm is not None:
        data["map"]["pgm"] = s.map.pgm
    if s.map.synthetic is not None:
        synth = s.map.synthetic
        data["map"]["synthetic"] = {
            "width": synth.width,
            "height": synth.height,
            "n_blobs": synth.n_blobs,
            "radius_cells": list(synth.radius_cells),
            "seed": synth.seed,
        }
    if s.current.random is not None:
        r = s.current.random
        data["current"]["random_vortices"] = {
            "count": r.count,
            "circulation": list(r.circulation),
            "core_radius": list(r.core_radius),
            "seed": r.seed,
        }
    if s.obstacles.random is not None:
        r = s.obstacles.random
        data["obstacles"]["random"] = {
            "count": r.count,
            "kind": r.kind,
            "base_radius": list(r.base_radius),
            "radius_sigma": r.radius_sigma,
            "bound_margin": r.bound_margin,
            "speed": list(r.speed),
            "corridor_fraction": r.corridor_fraction,
            "keepout": r.keepout,
            "seed": r.seed,
        }
    if s.out_dir is not None:
        data["out_dir"] = s.out_dir
    return data


def save_scenario(s: Scenario, path) -> None:
    with open(path, "w") as fh:
        yaml.safe_dump(scenario_to_dict(s), fh, sort_keys=False)


def load_scenario(path, *, validate_environment: bool = True) -> Scenario:
    """Parse, default, and validate a scenario file.

    With ``validate_environment`` the map is actually built so errors like
    a start point on land surface at load time rather than mid-run.
    """
    with open(path) as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ScenarioError(f"{path}: YAML parse error: {exc}")
    scenario = parse_scenario(data, base_dir=os.path.dirname(os.path.abspath(path)))
    if validate_environment:
        build_environment(scenario)
    return scenario


# --------------------------------------------------------------------------
# environment construction


@dataclass(frozen=True)
class Environment:
    """Concrete world built from a scenario: map, currents, obstacles, limits."""

    gmap: GridMap
    current: CurrentField
    obstacles: tuple[Obstacle, ...]
    limits: ConstraintLimits
    current_stats: tuple[float, float, float]  # (min, max, mean) over allowed cells

    @property
    def dynamic(self) -> bool:
        """True when the obstacle realization varies across epochs."""
        return any(
            ob.kind is ObstacleKind.MOVING or ob.radius_sigma > 0 for ob in self.obstacles
        )


def _build_map(spec: MapSpec) -> GridMap:
    if spec.pgm is not None:
        raster = read_pgm(spec.pgm)
    else:
        synth = spec.synthetic
        raster = synthetic_raster(
            synth.width, synth.height, synth.n_blobs, synth.radius_cells, synth.seed
        )
    return cluster_map(
        raster,
        k=spec.cluster_k,
        max_iters=spec.cluster_max_iters,
        seed=spec.cluster_seed,
        cell_size=spec.cell_size,
        origin=spec.origin,
    )


def _build_current(spec: CurrentSpec, gmap: GridMap) -> CurrentField:
    vortices = list(spec.vortices)
    if spec.random is not None and spec.random.count > 0:
        rng = substream(spec.random.seed, DOMAIN_VORTEX)
        x0, x1, y0, y1 = gmap.extent
        inset_x, inset_y = 0.05 * (x1 - x0), 0.05 * (y1 - y0)
        for _ in range(spec.random.count):
            cx = rng.uniform(x0 + inset_x, x1 - inset_x)
            cy = rng.uniform(y0 + inset_y, y1 - inset_y)
            magnitude = rng.uniform(*spec.random.circulation)
            sign = 1.0 if rng.random() < 0.5 else -1.0
            core = rng.uniform(*spec.random.core_radius)
            vortices.append(LambVortex(center=(cx, cy), circulation=sign * magnitude,
                                       core_radius=core))
    return CurrentField(vortices=tuple(vortices), background=spec.background)


def _build_random_obstacles(spec: RandomObstacleSpec, start, goal) -> list[Obstacle]:
    rng = substream(spec.seed, DOMAIN_PLACEMENT)
    p0 = np.asarray(start[:2])
    p1 = np.asarray(goal[:2])
    track = p1 - p0
    distance = float(np.linalg.norm(track))
    if distance == 0:
        along = np.array([1.0, 0.0])
    else:
        along = track / distance
    across = np.array([-along[1], along[0]])
    half_width = spec.corridor_fraction * max(distance, 1.0)
    depth = 0.5 * (start[2] + goal[2])

    obstacles = []
    for index in range(spec.count):
        if spec.kind == "mixed":
            kind = ObstacleKind.STATIC if index % 2 == 0 else ObstacleKind.MOVING
        else:
            kind = ObstacleKind(spec.kind)
        for _ in range(64):  # rejection sampling against the endpoint keep-outs
            s = rng.uniform(0.15, 0.85)
            w = rng.uniform(-half_width, half_width)
            center = p0 + s * track + w * across
            if (np.linalg.norm(center - p0) >= spec.keepout
                    and np.linalg.norm(center - p1) >= spec.keepout):
                break
        base = rng.uniform(*spec.base_radius)
        velocity = (0.0, 0.0)
        coupled = False
        if kind is ObstacleKind.MOVING:
            angle = rng.uniform(-math.pi, math.pi)
            mag = rng.uniform(*spec.speed)
            velocity = (mag * math.cos(angle), mag * math.sin(angle))
            coupled = bool(rng.random() < 0.5)
        obstacles.append(
            Obstacle(
                kind=kind,
                center=(float(center[0]), float(center[1]), depth),
                base_radius=base,
                radius_sigma=spec.radius_sigma,
                radius_bounds=(base, base + spec.bound_margin),
                velocity=velocity,
                current_coupled=coupled,
            )
        )
    return obstacles


def build_environment(scenario: Scenario) -> Environment:
    """Materialize the world and check the endpoint invariants."""
    gmap = _build_map(scenario.map)
    current = _build_current(scenario.current, gmap)

    for label, point in (("start", scenario.start), ("goal", scenario.goal)):
        if gmap.forbidden_mask(np.asarray(point[:2]).reshape(1, 2))[0]:
            raise ScenarioError(
                f"scenario.{label}: point {point[:2]} lies in a forbidden cell"
            )

    obstacles = list(scenario.obstacles.explicit)
    if scenario.obstacles.random is not None:
        obstacles.extend(
            _build_random_obstacles(scenario.obstacles.random, scenario.start, scenario.goal)
        )

    stats = current_magnitude_stats(current, gmap)
    derived = scenario.speed + stats[1]
    limits = ConstraintLimits(
        z_min=scenario.limits.z_min,
        z_max=scenario.limits.z_max,
        u_max=scenario.limits.u_max if scenario.limits.u_max is not None else derived,
        v_max=scenario.limits.v_max if scenario.limits.v_max is not None else derived,
        theta_max=scenario.limits.theta_max,
        yaw_rate_max=scenario.limits.yaw_rate_max,
    )
    return Environment(
        gmap=gmap,
        current=current,
        obstacles=tuple(obstacles),
        limits=limits,
        current_stats=stats,
    )


def apply_overrides(
    scenario: Scenario,
    *,
    seed: int | None = None,
    iters: int | None = None,
    time_mode: str | None = None,
    donor: str | None = None,
    out_dir: str | None = None,
) -> Scenario:
    """Return a copy of the scenario with CLI overrides applied."""
    de_cfg = scenario.de
    if seed is not None:
        de_cfg = replace(de_cfg, seed=seed)
    if iters is not None:
        if iters < 0:
            raise ScenarioError("--iters must be >= 0")
        de_cfg = replace(de_cfg, iter_max=iters)
    if donor is not None:
        if donor not in ("weighted", "rand1"):
            raise ScenarioError("--donor must be 'weighted' or 'rand1'")
        de_cfg = replace(de_cfg, donor_mode=donor)
    if time_mode is not None:
        if time_mode not in ("literal", "current"):
            raise ScenarioError("--time-mode must be 'literal' or 'current'")
    return replace(
        scenario,
        de=de_cfg,
        seed=de_cfg.seed,
        time_mode=time_mode if time_mode is not None else scenario.time_mode,
        out_dir=out_dir if out_dir is not None else scenario.out_dir,
    )
