"""Car-following dynamics on a per-direction ring, plus the driver-alert response.

Vehicles recirculate on a closed ring (one per travel direction) so traffic
density stays constant. Longitudinal control is the Intelligent Driver Model;
an active message sign switches the desired speed to the caution setpoint
after a perception-reaction delay, and alerted drivers may apply emergency
braking when an animal is on the road ahead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Optional

if TYPE_CHECKING:
    from .animals import AnimalState
    from .config import GeometryParams

# Gap used when a vehicle has no leader, so the car-following law stays total.
FREE_ROAD_GAP = 1.0e6


@dataclass
class IdmParams:
    """Intelligent Driver Model parameters plus the driver-response constants."""

    s0: float = 5.0            # jam distance, m
    T: float = 1.5             # time headway, s
    a_max: float = 2.5         # max acceleration, m/s^2
    b_conf: float = 4.0        # comfortable deceleration, m/s^2
    delta: float = 4.0         # free-flow exponent
    a_em: float = 9.0          # emergency deceleration cap, m/s^2
    v_cruise: float = 27.78    # desired speed, m/s (100 km/h)
    v_caution: float = 8.33    # alerted desired speed, m/s (30 km/h)
    t_react: float = 1.5       # perception-reaction time, s

    def validate(self) -> list[str]:
        problems = []
        for name in ("s0", "T", "a_max", "b_conf", "delta", "a_em",
                     "v_cruise", "v_caution", "t_react"):
            if getattr(self, name) <= 0:
                problems.append(f"idm.{name}: must be positive")
        if self.v_caution >= self.v_cruise:
            problems.append("idm.v_caution: must be below v_cruise")
        if self.a_em <= self.b_conf:
            problems.append("idm.a_em: must exceed b_conf")
        return problems


@dataclass
class VehicleState:
    """One vehicle on the ring. ``x`` wraps modulo road length; ``v`` never goes negative."""

    vid: int
    x: float
    v: float
    direction: int             # +1 or -1 along the road axis
    lane: int
    alerted: bool = False
    alert_onset: Optional[float] = None
    desired_speed: float = 27.78
    emergency_braking: bool = False
    leader: Optional["VehicleState"] = field(default=None, repr=False)


def desired_gap(v: float, dv: float, p: IdmParams) -> float:
    """Desired gap s* to the leader; clamped at zero if the closing term goes negative."""
    s_star = p.s0 + v * p.T + v * dv / (2.0 * math.sqrt(p.a_max * p.b_conf))
    return s_star if s_star > 0.0 else 0.0


def idm_acceleration(v: float, v0: float, dv: float, s: float, p: IdmParams) -> float:
    """IDM acceleration; ``s`` must be positive (use FREE_ROAD_GAP when no leader)."""
    if s <= 0.0:
        raise ValueError(f"non-positive gap {s}: vehicles may not interpenetrate")
    s_star = desired_gap(v, dv, p)
    a = p.a_max * (1.0 - (v / v0) ** p.delta - (s_star / s) ** 2)
    return a if a > -p.a_em else -p.a_em


def step_vehicle(state: VehicleState, a: float, dt: float, road_length: float) -> None:
    """Semi-implicit Euler update: speed first (floored at 0), then position on the ring."""
    v = state.v + a * dt
    if v < 0.0:
        v = 0.0
    state.v = v
    state.x = (state.x + v * dt * state.direction) % road_length


def update_driver_alert(state: VehicleState, dms_active: bool, now: float,
                        p: IdmParams) -> None:
    """Apply the message-sign state to the driver.

    The caution setpoint takes effect once the sign has been visible for the
    perception-reaction time; deactivation reverts to cruise immediately.
    """
    if dms_active:
        if state.alert_onset is None:
            state.alert_onset = now
        if not state.alerted and now - state.alert_onset >= p.t_react:
            state.alerted = True
            state.desired_speed = p.v_caution
    else:
        state.alert_onset = None
        state.alerted = False
        state.desired_speed = p.v_cruise


def stopping_envelope(v: float, p: IdmParams) -> float:
    """Kinematic stopping envelope: braking distance at b_conf plus reaction travel."""
    return v * v / (2.0 * p.b_conf) + v * p.t_react


def emergency_brake_needed(vehicle: VehicleState, animals: Iterable["AnimalState"],
                           geometry: "GeometryParams", p: IdmParams,
                           road_length: float) -> bool:
    """True when an alerted driver faces an animal on his lane, ahead, inside
    the kinematic stopping envelope.

    The scan band is the vehicle's own lane (padded by the animal radius), so
    vehicles clear of the crossing path roll through instead of stopping
    inside it. Animals holding at the road edge (y = 0) do not trigger
    braking; animals on the carriageway do. A standstill zone of the jam
    distance ahead of the bumper keeps a stopped vehicle from creeping into
    an animal still crossing in front of it.
    """
    if not vehicle.alerted:
        return False
    reach = stopping_envelope(vehicle.v, p)
    hold_zone = p.s0 + geometry.vehicle_length / 2.0 + geometry.animal_radius
    if reach < hold_zone:
        reach = hold_zone
    road_width = geometry.road_width
    band = geometry.lane_width / 2.0 + geometry.animal_radius
    centre = geometry.lane_centre(vehicle.lane)
    vx = vehicle.x
    sign = vehicle.direction
    for a in animals:
        if 0.0 < a.y <= road_width and abs(a.y - centre) < band:
            ahead = ((a.x - vx) * sign) % road_length
            if ahead < reach:
                return True
    return False


def link_ring_leaders(vehicles: list[VehicleState], road_length: float) -> None:
    """Assign each vehicle its leader on the same directional ring.

    Ring order is fixed for the whole trial: IDM keeps followers behind their
    leaders, so the neighbour assignment never changes.
    """
    for direction in (1, -1):
        group = [v for v in vehicles if v.direction == direction]
        if len(group) < 2:
            for v in group:
                v.leader = None
            continue
        # Sort in travel order so group[i+1] is directly ahead of group[i].
        group.sort(key=lambda v: v.x * direction)
        n = len(group)
        for i, v in enumerate(group):
            v.leader = group[(i + 1) % n]


def leader_gap(vehicle: VehicleState, road_length: float, vehicle_length: float) -> float:
    """Bumper-to-bumper gap to the ring leader (FREE_ROAD_GAP when there is none)."""
    lead = vehicle.leader
    if lead is None:
        return FREE_ROAD_GAP
    centre_gap = ((lead.x - vehicle.x) * vehicle.direction) % road_length
    return centre_gap - vehicle_length
