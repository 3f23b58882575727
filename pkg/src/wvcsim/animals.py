"""Animal arrivals and the six-state behavioural model.

Animals arrive by a Poisson process, forage off-road, approach the carriageway,
and decide at the road edge whether to cross, freeze, or flee depending on the
perceived vehicle threat. Crossing animals can freeze mid-road after a
dangerous encounter with a vehicle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, NamedTuple, Optional, Sequence

import numpy as np

from .vehicles import VehicleState

if TYPE_CHECKING:
    from .config import GeometryParams

# Countdown comparisons tolerate float accumulation error.
_DWELL_EPS = 1e-9

# Proximity at which an emergency-braking vehicle counts as a dangerous
# interaction for a crossing animal.
BRAKING_INTERACTION_DISTANCE = 50.0


class Activity(str, Enum):
    FORAGING = "Foraging"
    APPROACHING = "Approaching"
    HESITATING = "Hesitating"
    CROSSING = "Crossing"
    FROZEN = "Frozen"
    FLEEING = "Fleeing"
    MOVED_AWAY = "MovedAway"


# (weight, sigma_low, sigma_high) per body-size class: small, medium, large.
DEFAULT_SIZE_MIXTURE = (
    (0.15, 0.25, 0.55),
    (0.60, 0.70, 1.20),
    (0.25, 1.40, 2.30),
)


@dataclass
class BehaviourParams:
    """Dwell ranges, branch probabilities, speeds, and threat-zone constants."""

    forage_dwell: tuple[float, float] = (2.0, 10.0)
    hesitate_dwell: tuple[float, float] = (0.5, 3.0)
    p_cross_no_threat: float = 0.80
    p_frozen_threat: float = 0.10
    p_flee_threat: float = 0.20
    p_freeze_crossing: float = 0.15   # per dangerous vehicle interaction
    v_approach: float = 1.5
    v_cross: float = 4.0
    v_flee: float = 6.0
    size_mixture: tuple[tuple[float, float, float], ...] = DEFAULT_SIZE_MIXTURE
    t_threat: float = 5.0             # threat horizon: time-to-arrival, s
    v_threat: float = 10.0            # threat speed floor, m/s
    near_pass_distance: float = 20.0  # flight-zone radius behind a passing vehicle, m
    frozen_max_dwell: float = 8.0

    def validate(self) -> list[str]:
        problems = []
        for name in ("p_cross_no_threat", "p_frozen_threat", "p_flee_threat",
                     "p_freeze_crossing"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                problems.append(f"behaviour.{name}: must be in [0, 1]")
        if self.p_frozen_threat + self.p_flee_threat > 1.0:
            problems.append("behaviour: threat branch probabilities exceed 1")
        if abs(sum(w for w, _, _ in self.size_mixture) - 1.0) > 1e-9:
            problems.append("behaviour.size_mixture: weights must sum to 1")
        if not (0.0 < self.v_approach < self.v_cross < self.v_flee):
            problems.append("behaviour: speeds must satisfy 0 < approach < cross < flee")
        for name in ("t_threat", "v_threat", "frozen_max_dwell"):
            if getattr(self, name) <= 0:
                problems.append(f"behaviour.{name}: must be positive")
        if self.near_pass_distance < 0:
            problems.append("behaviour.near_pass_distance: must be non-negative")
        for name in ("forage_dwell", "hesitate_dwell"):
            lo, hi = getattr(self, name)
            if not 0.0 <= lo <= hi:
                problems.append(f"behaviour.{name}: bad dwell range")
        return problems


class Arrival(NamedTuple):
    time: float     # seconds since trial start
    x: float        # metres along the road
    sigma: float    # body-size factor (radar cross-section proxy)


@dataclass
class AnimalState:
    """One animal's position, behavioural state, and bookkeeping flags.

    ``detected`` and ``entered_road`` are monotone; MOVED_AWAY is absorbing.
    ``frozen_from`` remembers the activity a frozen animal resumes on release.
    """

    aid: int
    x: float
    y: float
    sigma: float
    state: Activity = Activity.FORAGING
    dwell_remaining: float = 0.0
    detected: bool = False
    first_in_range_at: Optional[float] = None
    detected_at: Optional[float] = None
    entered_road: bool = False
    crossed: bool = False
    collided: bool = False
    left_foraging: bool = False
    frozen_from: Optional[Activity] = None
    interacted_vehicles: set[int] = field(default_factory=set)


def sample_sigma(mixture: Sequence[tuple[float, float, float]],
                 rng: np.random.Generator) -> float:
    """Draw one body-size factor from the class mixture."""
    u = rng.random()
    acc = 0.0
    for weight, lo, hi in mixture:
        acc += weight
        if u < acc:
            return rng.uniform(lo, hi)
    lo, hi = mixture[-1][1], mixture[-1][2]
    return rng.uniform(lo, hi)


def sample_arrivals(rate_per_hour: float, duration_hours: float, road_length: float,
                    size_scale: float, params: BehaviourParams,
                    rng: np.random.Generator) -> list[Arrival]:
    """Poisson arrival schedule: exponential inter-arrival times, uniform positions.

    Sizes are drawn from the mixture and then multiplied by ``size_scale``, so
    the underlying draws (and hence times and positions) are identical across
    size scalings for the same stream.
    """
    if rate_per_hour < 0:
        raise ValueError("arrival rate must be non-negative")
    if duration_hours <= 0:
        raise ValueError("duration must be positive")
    if rate_per_hour == 0:
        return []
    horizon = duration_hours * 3600.0
    mean_gap = 3600.0 / rate_per_hour
    arrivals: list[Arrival] = []
    t = rng.exponential(mean_gap)
    while t <= horizon:
        x = rng.uniform(0.0, road_length)
        sigma = sample_sigma(params.size_mixture, rng) * size_scale
        arrivals.append(Arrival(t, x, sigma))
        t += rng.exponential(mean_gap)
    return arrivals


def vehicle_is_threat(animal_x: float, vehicle: VehicleState,
                      params: BehaviourParams, road_length: float) -> bool:
    """One vehicle's threat test.

    A vehicle above the threat speed floor is threatening while it will reach
    the animal within the time horizon, and while it is still within the
    near-pass distance after going by.
    """
    v = vehicle.v
    if v <= params.v_threat:
        return False
    dx = ((animal_x - vehicle.x) * vehicle.direction) % road_length
    if dx < params.t_threat * v:
        return True
    return road_length - dx < params.near_pass_distance


def threat_present(animal: AnimalState, vehicles: Sequence[VehicleState],
                   params: BehaviourParams, road_length: float) -> bool:
    """True when any vehicle threatens the animal's road position."""
    ax = animal.x
    for veh in vehicles:
        if vehicle_is_threat(ax, veh, params, road_length):
            return True
    return False


def _enter_hesitating(animal: AnimalState, params: BehaviourParams,
                      rng: np.random.Generator) -> None:
    animal.state = Activity.HESITATING
    animal.dwell_remaining = rng.uniform(*params.hesitate_dwell)


def _enter_frozen(animal: AnimalState, came_from: Activity,
                  params: BehaviourParams) -> None:
    animal.state = Activity.FROZEN
    animal.frozen_from = came_from
    animal.dwell_remaining = params.frozen_max_dwell


def step_animal(animal: AnimalState, vehicles: Sequence[VehicleState],
                dt: float, params: BehaviourParams, geometry: "GeometryParams",
                road_length: float, rng: np.random.Generator) -> None:
    """Advance one animal by one time step (in place).

    State semantics:
      FORAGING     hold position until the dwell expires, then approach.
      APPROACHING  move toward the road; stop at the near edge (y = 0) and hesitate.
      HESITATING   on dwell expiry, branch on vehicle threat; unresolved draws
                   redraw the dwell and re-evaluate later.
      CROSSING     traverse the carriageway; a dangerous vehicle encounter
                   (threatening, or emergency-braking within 50 m) rolls a
                   freeze once per vehicle; past the far edge, walk out to the
                   exit offset and leave.
      FROZEN       hold until no threat remains or the maximum dwell elapses,
                   then resume the interrupted activity.
      FLEEING      retreat; gone once back at the spawn offset.
    """
    state = animal.state
    if state is Activity.MOVED_AWAY:
        raise ValueError(f"animal {animal.aid} stepped after it left the corridor")

    if state is Activity.FORAGING:
        animal.dwell_remaining -= dt
        if animal.dwell_remaining <= _DWELL_EPS:
            animal.state = Activity.APPROACHING
            animal.left_foraging = True
        return

    if state is Activity.APPROACHING:
        ny = animal.y + params.v_approach * dt
        if ny >= 0.0:
            animal.y = 0.0
            _enter_hesitating(animal, params, rng)
        else:
            animal.y = ny
        return

    if state is Activity.HESITATING:
        animal.dwell_remaining -= dt
        if animal.dwell_remaining > _DWELL_EPS:
            return
        u = rng.random()
        if threat_present(animal, vehicles, params, road_length):
            if u < params.p_frozen_threat:
                _enter_frozen(animal, Activity.HESITATING, params)
            elif u < params.p_frozen_threat + params.p_flee_threat:
                animal.state = Activity.FLEEING
            else:
                animal.dwell_remaining = rng.uniform(*params.hesitate_dwell)
        else:
            if u < params.p_cross_no_threat:
                animal.state = Activity.CROSSING
            else:
                animal.dwell_remaining = rng.uniform(*params.hesitate_dwell)
        return

    if state is Activity.CROSSING:
        road_width = geometry.road_width
        if animal.y < road_width:
            # Dangerous interactions roll a freeze at most once per vehicle.
            interacted = animal.interacted_vehicles
            ax = animal.x
            for veh in vehicles:
                if veh.vid in interacted:
                    continue
                if veh.emergency_braking:
                    dx = abs(veh.x - ax)
                    if min(dx, road_length - dx) >= BRAKING_INTERACTION_DISTANCE:
                        continue
                elif not vehicle_is_threat(ax, veh, params, road_length):
                    continue
                interacted.add(veh.vid)
                if rng.random() < params.p_freeze_crossing:
                    _enter_frozen(animal, Activity.CROSSING, params)
                    return
        ny = animal.y + params.v_cross * dt
        animal.y = ny
        if ny > 0.0:
            animal.entered_road = True
        if ny >= road_width:
            animal.crossed = True
            if ny >= road_width + geometry.exit_offset:
                animal.state = Activity.MOVED_AWAY
        return

    if state is Activity.FROZEN:
        animal.dwell_remaining -= dt
        released = animal.dwell_remaining <= _DWELL_EPS or not threat_present(
            animal, vehicles, params, road_length)
        if released:
            if animal.frozen_from is Activity.CROSSING:
                animal.state = Activity.CROSSING
            else:
                _enter_hesitating(animal, params, rng)
            animal.frozen_from = None
        return

    if state is Activity.FLEEING:
        animal.y -= params.v_flee * dt
        if animal.y <= geometry.spawn_offset:
            animal.state = Activity.MOVED_AWAY
        return

    raise AssertionError(f"unhandled activity {state}")
