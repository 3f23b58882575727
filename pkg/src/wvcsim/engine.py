"""Discrete-time trial engine: phase ordering, collisions, metrics, RNG discipline.

Each step runs a fixed phase order: (1) spawn due arrivals, (2) radar
detection against the previous step's awareness state, (3) awareness and sign
update from the new events, (4) vehicle alert/acceleration/integration from a
synchronous snapshot, (5) animal behaviour, (6) collision check, (7) metric
accumulation. A trial is a pure function of (config, duration, trial_id,
master_seed).
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .animals import Activity, AnimalState, Arrival, sample_arrivals, step_animal
from .awareness import AwarenessState
from .config import CorridorConfig, Mode, build_corridor
from .detection import DetectionParams, try_detect
from .vehicles import FREE_ROAD_GAP, emergency_brake_needed, idm_acceleration


class EngineInvariantError(RuntimeError):
    """An internal invariant broke mid-trial: an engine bug, not data."""


# Stream tags; behaviour and detection are additionally mode-private.
_STREAM_ARRIVALS = 0
_STREAM_BEHAVIOUR = 1
_STREAM_DETECTION = 2

_MODE_INDEX = {Mode.CONTROL: 0, Mode.DETECTION: 1, Mode.AWARE: 2}


@dataclass
class RngStreams:
    """Independent substreams for one trial.

    The arrivals stream depends on (master_seed, trial_id) only, never on the
    mode, so the Poisson input is bit-identical across compared modes.
    """

    arrivals: np.random.Generator
    behaviour: np.random.Generator
    detection: np.random.Generator

    @classmethod
    def for_trial(cls, master_seed: int, trial_id: int, mode: Mode) -> "RngStreams":
        m = _MODE_INDEX[mode]

        def gen(*spawn_key: int) -> np.random.Generator:
            seq = np.random.SeedSequence(entropy=master_seed, spawn_key=spawn_key)
            return np.random.Generator(np.random.PCG64(seq))

        return cls(
            arrivals=gen(trial_id, _STREAM_ARRIVALS),
            behaviour=gen(trial_id, _STREAM_BEHAVIOUR, m),
            detection=gen(trial_id, _STREAM_DETECTION, m),
        )


def make_arrival_schedule(config: CorridorConfig, duration_hours: float,
                          trial_id: int, master_seed: int) -> list[Arrival]:
    """The trial's arrival schedule; independent of the operating mode."""
    streams = RngStreams.for_trial(master_seed, trial_id, config.mode)
    return sample_arrivals(config.arrival_rate, duration_hours, config.road_length,
                           config.size_scale, config.behaviour, streams.arrivals)


@dataclass
class TrialResult:
    """All per-trial outcome metrics."""

    trial_id: int
    mode: Mode
    seed: int
    sim_hours: float
    arrivals: int = 0
    road_entries: int = 0
    crossing_successes: int = 0
    collisions: int = 0
    detected: int = 0
    detectable: int = 0
    mean_in_range_latency: Optional[float] = None
    median_in_range_latency: Optional[float] = None
    frozen_on_road_time: float = 0.0
    state_visit_counts: dict[str, int] = field(default_factory=dict)
    exits_clean: int = 0
    active_at_end: int = 0

    @property
    def collision_rate_per_entry_pct(self) -> Optional[float]:
        if self.road_entries == 0:
            return None
        return 100.0 * self.collisions / self.road_entries

    @property
    def detection_rate_pct(self) -> Optional[float]:
        if self.detectable == 0:
            return None
        return 100.0 * self.detected / self.detectable

    @property
    def crossing_success_rate_pct(self) -> Optional[float]:
        if self.arrivals == 0:
            return None
        return 100.0 * self.crossing_successes / self.arrivals

    def check_invariants(self) -> None:
        problems = []
        if self.collisions > self.road_entries:
            problems.append("collisions exceed road entries")
        if self.crossing_successes > self.road_entries:
            problems.append("crossing successes exceed road entries")
        if not (self.detected <= self.detectable <= self.arrivals):
            problems.append("detected/detectable/arrivals ordering broken")
        if self.exits_clean + self.collisions + self.active_at_end != self.arrivals:
            problems.append("animal conservation broken")
        if self.mode is Mode.CONTROL and self.detected != 0:
            problems.append("detections in Control mode")
        if problems:
            raise EngineInvariantError(
                f"trial {self.trial_id} ({self.mode.value}): " + "; ".join(problems))


def detect_collisions(vehicles, animals, geometry, road_length: float):
    """(vehicle id, animal id) contact pairs for animals inside the road band."""
    x_thresh = geometry.vehicle_length / 2.0 + geometry.animal_radius
    y_thresh = geometry.vehicle_width / 2.0 + geometry.animal_radius
    road_width = geometry.road_width
    centres = [geometry.lane_centre(i) for i in range(geometry.n_lanes)]
    pairs = []
    for a in animals:
        if not 0.0 <= a.y <= road_width:
            continue
        for v in vehicles:
            dx = abs(v.x - a.x)
            if min(dx, road_length - dx) < x_thresh and \
                    abs(a.y - centres[v.lane]) < y_thresh:
                pairs.append((v.vid, a.aid))
    return pairs


def run_trial(config: CorridorConfig, duration_hours: float, trial_id: int,
              master_seed: int) -> TrialResult:
    """Run one trial and return its fully populated result.

    Raises ValueError on an invalid config and EngineInvariantError if any
    internal invariant breaks (which would be an engine bug).
    """
    world = build_corridor(config)
    streams = RngStreams.for_trial(master_seed, trial_id, config.mode)
    schedule = sample_arrivals(config.arrival_rate, duration_hours,
                               config.road_length, config.size_scale,
                               config.behaviour, streams.arrivals)

    dt = config.time_step
    n_steps = int(math.ceil(duration_hours * 3600.0 / dt - 1e-9))
    result = TrialResult(trial_id=trial_id, mode=config.mode, seed=master_seed,
                         sim_hours=duration_hours, arrivals=len(schedule))
    visits = {a.value: 0 for a in Activity}

    # Hot-loop locals.
    L = config.road_length
    geometry = config.geometry
    idm = config.idm
    behaviour = config.behaviour
    radars = world.radars
    spacing = config.radar_spacing
    det_params = DetectionParams(kappa=config.kappa, r_det=config.radar_range)
    awareness = AwarenessState(config, len(radars))
    beta_for = awareness.beta_for
    vehicles = world.vehicles
    rng_b = streams.behaviour
    rng_d = streams.detection
    sensing = bool(radars)
    road_width = geometry.road_width
    spawn_y = geometry.spawn_offset
    forage_lo, forage_hi = behaviour.forage_dwell

    active: list[AnimalState] = world.animals
    all_animals: list[AnimalState] = []
    latencies: list[float] = []
    events = []
    accels = [0.0] * len(vehicles)
    next_arrival = 0
    n_schedule = len(schedule)
    frozen_time = 0.0
    road_entries = 0
    crossing_successes = 0
    collisions = 0
    veh_length = geometry.vehicle_length

    # The sign is corridor-wide, so the alert state machine is shared by all
    # drivers; track it once and mirror it onto the vehicles on transitions.
    alert_onset: Optional[float] = None
    alerted = False

    for k in range(n_steps):
        now = k * dt

        # Phase 1: spawn due arrivals.
        while next_arrival < n_schedule and schedule[next_arrival].time <= now:
            arr = schedule[next_arrival]
            animal = AnimalState(aid=next_arrival, x=arr.x, y=spawn_y,
                                 sigma=arr.sigma,
                                 dwell_remaining=rng_b.uniform(forage_lo, forage_hi))
            active.append(animal)
            all_animals.append(animal)
            visits[Activity.FORAGING.value] += 1
            next_arrival += 1

        # Phase 2: detection against the previous step's awareness state.
        if sensing and active:
            for a in active:
                if not a.detected:
                    ev = try_detect(a, radars, spacing, beta_for, now, dt,
                                    det_params, rng_d)
                    if ev is not None:
                        events.append(ev)
                        latencies.append(a.detected_at - a.first_in_range_at)

        # Phase 3: awareness / sign update from this step's events.
        if events:
            for ev in events:
                awareness.on_detection(ev, radars)
            events.clear()
        dms = awareness.dms_active(active, now)

        # Phase 4: vehicles, synchronously from the pre-step snapshot.
        if dms:
            if alert_onset is None:
                alert_onset = now
            if not alerted and now - alert_onset >= idm.t_react:
                alerted = True
                for v in vehicles:
                    v.alerted = True
                    v.desired_speed = idm.v_caution
        elif alert_onset is not None or alerted:
            alert_onset = None
            alerted = False
            for v in vehicles:
                v.alerted = False
                v.desired_speed = idm.v_cruise
        for v in vehicles:
            v.alert_onset = alert_onset

        road_animals = None
        if alerted and active:
            road_animals = [a for a in active if 0.0 <= a.y <= road_width]

        for i, v in enumerate(vehicles):
            lead = v.leader
            if lead is None:
                gap = FREE_ROAD_GAP
                dv = 0.0
            else:
                gap = ((lead.x - v.x) * v.direction) % L - veh_length
                dv = v.v - lead.v
            if gap <= 0.0:
                raise EngineInvariantError(
                    f"trial {trial_id}: vehicles {v.vid} and {lead.vid} overlap at t={now:.1f}")
            a_cmd = idm_acceleration(v.v, v.desired_speed, dv, gap, idm)
            if road_animals and emergency_brake_needed(v, road_animals, geometry,
                                                       idm, L):
                a_cmd = -idm.a_em
                v.emergency_braking = True
            else:
                v.emergency_braking = False
            accels[i] = a_cmd
        for i, v in enumerate(vehicles):
            a_cmd = accels[i]
            nv = v.v + a_cmd * dt
            if nv < 0.0:
                nv = 0.0
            v.v = nv
            v.x = (v.x + nv * dt * v.direction) % L

        if not active:
            continue

        # Phase 5: animal behaviour, with entry/success/state accounting.
        pruned = False
        for a in active:
            prev_state = a.state
            prev_entered = a.entered_road
            prev_crossed = a.crossed
            step_animal(a, vehicles, dt, behaviour, geometry, L, rng_b)
            st = a.state
            if st is not prev_state:
                visits[st.value] += 1
                if st is Activity.MOVED_AWAY:
                    pruned = True
            if a.entered_road and not prev_entered:
                road_entries += 1
            if a.crossed and not prev_crossed:
                crossing_successes += 1
            if st is Activity.FROZEN and 0.0 <= a.y <= road_width:
                frozen_time += dt

        # Phase 6: collisions; the animal is removed, the vehicle continues.
        pairs = detect_collisions(vehicles, active, geometry, L)
        if pairs:
            by_id = {a.aid: a for a in active}
            for _vid, aid in pairs:
                a = by_id[aid]
                if a.collided:
                    continue
                collisions += 1
                a.collided = True
                a.state = Activity.MOVED_AWAY
                visits[Activity.MOVED_AWAY.value] += 1
                pruned = True

        if pruned:
            active = [a for a in active if a.state is not Activity.MOVED_AWAY]

    # Phase 7 aggregation.
    result.road_entries = road_entries
    result.crossing_successes = crossing_successes
    result.collisions = collisions
    result.frozen_on_road_time = frozen_time
    result.detected = sum(1 for a in all_animals if a.detected)
    result.detectable = sum(1 for a in all_animals if a.left_foraging)
    result.exits_clean = sum(1 for a in all_animals
                             if a.state is Activity.MOVED_AWAY and not a.collided)
    result.active_at_end = len(active)
    result.state_visit_counts = visits
    if latencies:
        result.mean_in_range_latency = sum(latencies) / len(latencies)
        result.median_in_range_latency = statistics.median(latencies)
    result.check_invariants()
    return result
