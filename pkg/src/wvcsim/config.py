"""Corridor configuration, sensor topology, and world construction.

The configuration is a plain dataclass tree loadable from a single JSON
document. Topology construction is deterministic: radar nodes sit on a regular
grid along the shoulders, alternating sides, with inert magnetometer sites
interleaved at a coarser pitch.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields as dc_fields, is_dataclass
from enum import Enum
from typing import Any

from .animals import AnimalState, BehaviourParams
from .vehicles import IdmParams, VehicleState, link_ring_leaders

# Roadside strip (m from the shoulder) that the sensor line is meant to cover;
# used only for the coverage warning at sparse spacings.
ROADSIDE_COVERAGE_DEPTH = 10.0

NEAR = "Near"
FAR = "Far"


class Mode(str, Enum):
    CONTROL = "Control"
    DETECTION = "Detection"
    AWARE = "Aware"


@dataclass
class GeometryParams:
    """Road cross-section and body sizes. Lane 0 carries +x traffic, lane 1 -x."""

    lane_width: float = 3.7
    n_lanes: int = 2
    vehicle_length: float = 4.5
    vehicle_width: float = 1.8
    animal_radius: float = 0.5
    spawn_offset: float = -25.0   # animal spawn y, m (off-road side)
    exit_offset: float = 25.0     # distance past the far edge where animals leave

    @property
    def road_width(self) -> float:
        return self.lane_width * self.n_lanes

    def lane_centre(self, lane: int) -> float:
        return (lane + 0.5) * self.lane_width

    def validate(self) -> list[str]:
        problems = []
        for name in ("lane_width", "vehicle_length", "vehicle_width", "animal_radius",
                     "exit_offset"):
            if getattr(self, name) <= 0:
                problems.append(f"geometry.{name}: must be positive")
        if self.n_lanes < 2:
            problems.append("geometry.n_lanes: need one lane per direction")
        if self.spawn_offset >= 0:
            problems.append("geometry.spawn_offset: must be off-road (negative)")
        return problems


@dataclass
class CorridorConfig:
    """Full parameter set for one simulated corridor."""

    road_length: float = 1000.0
    time_step: float = 0.1
    radar_spacing: float = 15.0
    radar_range: float = 15.0
    magnetometer_spacing: float = 200.0
    awareness_range: float = 1500.0
    boost_factor: float = 1.8
    persistence_window: float = 30.0
    arrival_rate: float = 15.0        # animals per hour
    kappa: float = 3.0                # baseline per-second detection rate
    size_scale: float = 1.0
    vehicles_per_direction: int = 4
    mode: Mode = Mode.CONTROL
    idm: IdmParams = field(default_factory=IdmParams)
    behaviour: BehaviourParams = field(default_factory=BehaviourParams)
    geometry: GeometryParams = field(default_factory=GeometryParams)

    def with_mode(self, mode: Mode) -> "CorridorConfig":
        return replace_config(self, mode=mode)

    @property
    def radar_shoulder_near(self) -> float:
        return -0.5

    @property
    def radar_shoulder_far(self) -> float:
        return self.geometry.road_width + 0.5


@dataclass
class RadarNode:
    """One radar: grid index, position, shoulder side, and its boost-expiry clock."""

    rid: int
    x: float
    side: str                     # NEAR or FAR
    y: float
    boost_until: float = -math.inf


@dataclass
class MagnetometerSite:
    """Inert topology entry; constructed but never queried by the simulation."""

    x: float


def coverage_ok(spacing: float, d_y: float, r_det: float) -> bool:
    """Worst-case coverage test: detection radius must reach sqrt(spacing^2 + d_y^2)."""
    if spacing <= 0 or d_y <= 0 or r_det <= 0:
        raise ValueError("coverage_ok arguments must be positive")
    return r_det * r_det >= spacing * spacing + d_y * d_y


def validate_config(config: CorridorConfig) -> list[str]:
    """Collect human-readable diagnostics; empty list means the config is valid."""
    problems: list[str] = []
    for name in ("road_length", "time_step", "radar_spacing", "radar_range",
                 "magnetometer_spacing", "awareness_range", "persistence_window"):
        if getattr(config, name) <= 0:
            problems.append(f"{name}: must be positive")
    for name in ("arrival_rate", "kappa", "size_scale"):
        if getattr(config, name) < 0:
            problems.append(f"{name}: must be non-negative")
    if config.boost_factor < 1.0:
        problems.append("boost_factor: must be at least 1 (boost never suppresses)")
    if config.vehicles_per_direction < 0:
        problems.append("vehicles_per_direction: must be non-negative")
    if not isinstance(config.mode, Mode):
        problems.append(f"mode: unknown mode {config.mode!r}")
    problems.extend(config.idm.validate())
    problems.extend(config.behaviour.validate())
    problems.extend(config.geometry.validate())
    return problems


@dataclass
class World:
    """Mutable state of one trial: topology plus vehicles and the live animal list."""

    config: CorridorConfig
    radars: list[RadarNode]
    magnetometers: list[MagnetometerSite]
    vehicles: list[VehicleState]
    animals: list[AnimalState] = field(default_factory=list)


def _build_radars(config: CorridorConfig) -> list[RadarNode]:
    if config.mode is Mode.CONTROL:
        return []
    n = int(math.floor(config.road_length / config.radar_spacing)) + 1
    near_y = config.radar_shoulder_near
    far_y = config.radar_shoulder_far
    return [
        RadarNode(rid=i, x=i * config.radar_spacing,
                  side=NEAR if i % 2 == 0 else FAR,
                  y=near_y if i % 2 == 0 else far_y)
        for i in range(n)
    ]


def _build_vehicles(config: CorridorConfig) -> list[VehicleState]:
    vehicles: list[VehicleState] = []
    n = config.vehicles_per_direction
    if n == 0:
        return vehicles
    spacing = config.road_length / n
    vid = 0
    for direction, lane in ((1, 0), (-1, 1)):
        for i in range(n):
            vehicles.append(VehicleState(
                vid=vid, x=i * spacing, v=config.idm.v_cruise,
                direction=direction, lane=lane,
                desired_speed=config.idm.v_cruise))
            vid += 1
    link_ring_leaders(vehicles, config.road_length)
    return vehicles


def build_corridor(config: CorridorConfig) -> World:
    """Construct the deterministic world for one trial.

    Raises ValueError when the config fails validation.
    """
    problems = validate_config(config)
    if problems:
        raise ValueError("invalid config: " + "; ".join(problems))

    radars = _build_radars(config)
    n_mag = int(math.floor(config.road_length / config.magnetometer_spacing)) + 1
    magnetometers = [MagnetometerSite(x=i * config.magnetometer_spacing)
                     for i in range(n_mag)]

    return World(config=config, radars=radars, magnetometers=magnetometers,
                 vehicles=_build_vehicles(config))


# ---------------------------------------------------------------------------
# JSON configuration


def _dataclass_from_dict(cls, data: dict[str, Any], prefix: str):
    known = {f.name: f for f in dc_fields(cls)}
    unknown = set(data) - set(known)
    if unknown:
        raise ValueError(f"unknown config key(s): "
                         + ", ".join(sorted(prefix + k for k in unknown)))
    kwargs: dict[str, Any] = {}
    for name, value in data.items():
        if name == "mode":
            try:
                kwargs[name] = Mode(value)
            except ValueError:
                raise ValueError(f"mode: unknown mode {value!r}") from None
        elif name == "idm":
            kwargs[name] = _dataclass_from_dict(IdmParams, value, "idm.")
        elif name == "behaviour":
            kwargs[name] = _dataclass_from_dict(BehaviourParams, value, "behaviour.")
        elif name == "geometry":
            kwargs[name] = _dataclass_from_dict(GeometryParams, value, "geometry.")
        elif name == "size_mixture":
            kwargs[name] = tuple(tuple(c) for c in value)
        elif name in ("forage_dwell", "hesitate_dwell"):
            kwargs[name] = tuple(value)
        else:
            kwargs[name] = value
    return cls(**kwargs)


def config_from_dict(data: dict[str, Any]) -> CorridorConfig:
    """Build a config from a JSON-style dict; unknown keys are an error."""
    return _dataclass_from_dict(CorridorConfig, data, "")


def load_config(path: str) -> CorridorConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def config_to_dict(config: CorridorConfig) -> dict[str, Any]:
    """Inverse of config_from_dict (tuples become JSON lists)."""
    def convert(value):
        if isinstance(value, Mode):
            return value.value
        if is_dataclass(value):
            return {f.name: convert(getattr(value, f.name)) for f in dc_fields(value)}
        if isinstance(value, tuple):
            return [convert(v) for v in value]
        return value
    return convert(config)


def replace_config(config: CorridorConfig, **changes: Any) -> CorridorConfig:
    """Copy the config with top-level field changes (sub-params are shared)."""
    data = {f.name: getattr(config, f.name) for f in dc_fields(CorridorConfig)}
    data.update(changes)
    return CorridorConfig(**data)
