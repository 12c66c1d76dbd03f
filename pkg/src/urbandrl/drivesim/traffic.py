"""Scripted traffic: lane following, front-gap slowdown, yielding and random
branch choice at forks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import boxes_overlap
from .roadmap import RoadMap
from .vehicle import CAR_LENGTH, CAR_WIDTH

GAP_SLOW = 8.0      # start slowing below this bumper gap (m)
GAP_STOP = 2.0      # standstill gap (m)
TRAFFIC_ACCEL = 2.0
LOOKAHEAD = 20.0
PATH_HALF_WIDTH = 2.0
YIELD_WINDOW = (math.radians(-50.0), math.radians(10.0))


@dataclass
class TrafficVehicle:
    lane: str
    s: float
    speed: float
    cruise: float
    next_lane: str | None = None
    length: float = CAR_LENGTH
    width: float = CAR_WIDTH
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0

    def box(self) -> tuple[float, float, float, float, float]:
        return (self.x, self.y, self.heading, self.length, self.width)

    def place(self, road: RoadMap) -> None:
        self.x, self.y, self.heading = road.lanes[self.lane].path.pose_at(self.s)


def _choose_next(road: RoadMap, lane: str, rng: np.random.Generator) -> str | None:
    succ = road.lanes[lane].successors
    if not succ:
        return None
    if len(succ) == 1:
        return succ[0]
    return succ[int(rng.integers(len(succ)))]


def _spawn_slots(road: RoadMap, spacing: float) -> list[tuple[str, float]]:
    slots = []
    for name, lane in road.lanes.items():
        s = 0.5 * spacing
        while s < lane.path.length - 0.5 * spacing:
            slots.append((name, s))
            s += spacing
    return slots


def spawn_traffic(road: RoadMap, n: int, rng_seed, cruise: float = 6.0, spread: float = 1.0,
                  exclude: tuple[float, float, float] | None = None) -> list[TrafficVehicle]:
    """Place ``n`` vehicles on lane centerlines, about half near the ring.

    ``exclude = (x, y, radius)`` keeps a disc (the ego spawn) free.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    slots = _spawn_slots(road, CAR_LENGTH + 2.5)
    near_r = road.ring_radius + road.half_width + 6.0
    near, far = [], []
    for lane, s in slots:
        x, y, _ = road.lanes[lane].path.pose_at(s)
        if exclude is not None and math.hypot(x - exclude[0], y - exclude[1]) < exclude[2]:
            continue
        (near if math.hypot(x, y) <= near_r else far).append((lane, s))
    if n > len(near) + len(far):
        raise ValueError(f"{n} vehicles exceed the non-overlapping capacity of {len(near) + len(far)}")
    order_near = rng.permutation(len(near))
    order_far = rng.permutation(len(far))
    pools = [[near[i] for i in order_near], [far[i] for i in order_far]]
    quota = [(n + 1) // 2, n // 2]
    placed: list[TrafficVehicle] = []

    def try_place(lane: str, s: float) -> bool:
        v = TrafficVehicle(lane, s, 0.0, 0.0)
        v.place(road)
        if any(boxes_overlap(v.box(), o.box(), margin=0.5) for o in placed):
            return False
        placed.append(v)
        return True

    for pool, want in zip(pools, quota):
        while want > 0 and pool:
            if try_place(*pool.pop(0)):
                want -= 1
    # if one region ran out, top up from whatever is left
    rest = pools[0] + pools[1]
    while len(placed) < n and rest:
        try_place(*rest.pop(0))
    if len(placed) < n:
        raise ValueError(f"could not place {n} non-overlapping vehicles")
    for v in placed:
        v.cruise = float(cruise + spread * rng.uniform(-1.0, 1.0))
        v.speed = v.cruise
        v.next_lane = _choose_next(road, v.lane, rng)
    return placed


def _lookahead_points(road: RoadMap, v: TrafficVehicle) -> np.ndarray:
    ds = np.arange(1.0, LOOKAHEAD + 1.0, 1.0)
    lane = road.lanes[v.lane].path
    pts = []
    for d in ds:
        s = v.s + d
        if s <= lane.length or v.next_lane is None:
            x, y, _ = lane.pose_at(s)
        else:
            x, y, _ = road.lanes[v.next_lane].path.pose_at(s - lane.length)
        pts.append((x, y))
    return np.asarray(pts)


def front_gap(road: RoadMap, v: TrafficVehicle, obstacles) -> float:
    """Bumper gap to the nearest obstacle lying on this vehicle's path ahead."""
    path = _lookahead_points(road, v)
    best = math.inf
    for ob in obstacles:
        ox, oy, _, olen, _ = ob
        if (ox - v.x) ** 2 + (oy - v.y) ** 2 > (LOOKAHEAD + 5.0) ** 2:
            continue
        d = np.hypot(path[:, 0] - ox, path[:, 1] - oy)
        i = int(np.argmin(d))
        if d[i] < PATH_HALF_WIDTH:
            best = min(best, (i + 1.0) - 0.5 * (v.length + olen))
    return best


def _yield_gap(road: RoadMap, v: TrafficVehicle, obstacles) -> float:
    lane = road.lanes[v.lane]
    if lane.yield_s is None or v.s > lane.yield_s:
        return math.inf
    R, hw = road.ring_radius, road.half_width
    lo, hi = YIELD_WINDOW
    for ob in obstacles:
        ox, oy = ob[0], ob[1]
        r = math.hypot(ox, oy)
        if abs(r - R) > hw:
            continue
        rel = math.atan2(oy, ox) - lane.merge_angle
        rel = math.atan2(math.sin(rel), math.cos(rel))
        if lo <= rel <= hi:
            return lane.yield_s - v.s - 0.5 * v.length
    return math.inf


def _advance(road: RoadMap, v: TrafficVehicle, dist: float, rng: np.random.Generator,
             occupied) -> None:
    v.s += dist
    while v.s > road.lanes[v.lane].path.length:
        if v.next_lane is None:
            _respawn(road, v, rng, occupied)
            return
        v.s -= road.lanes[v.lane].path.length
        v.lane = v.next_lane
        v.next_lane = _choose_next(road, v.lane, rng)
    v.place(road)


def _respawn(road: RoadMap, v: TrafficVehicle, rng: np.random.Generator, occupied) -> None:
    entries = [name for name in road.lanes if name.startswith("in")]
    for i in rng.permutation(len(entries)):
        cand = TrafficVehicle(entries[i], 0.0, v.cruise, v.cruise, length=v.length, width=v.width)
        cand.place(road)
        if not any(boxes_overlap(cand.box(), o, margin=1.0) for o in occupied):
            v.lane, v.s, v.speed = cand.lane, 0.0, v.cruise
            v.next_lane = _choose_next(road, v.lane, rng)
            v.place(road)
            return
    # nowhere to go: wait at the end of the exit lane
    v.s = road.lanes[v.lane].path.length
    v.speed = 0.0
    v.place(road)


def step_traffic(road: RoadMap, traffic: list[TrafficVehicle], ego_box, dt: float,
                 rng: np.random.Generator) -> None:
    """Advance every traffic vehicle in place.

    Vehicles move one at a time; a move that would overlap any other
    vehicle (or the ego) is rejected and the vehicle stops, so the
    configuration stays overlap-free.
    """
    for i, v in enumerate(traffic):
        others = [o.box() for j, o in enumerate(traffic) if j != i]
        if ego_box is not None:
            others.append(ego_box)
        gap = min(front_gap(road, v, others), _yield_gap(road, v, others))
        factor = min(max((gap - GAP_STOP) / (GAP_SLOW - GAP_STOP), 0.0), 1.0)
        target = v.cruise * factor
        v.speed = min(v.speed + TRAFFIC_ACCEL * dt, target)
        if v.speed <= 0.0:
            v.speed = 0.0
            continue
        saved = (v.lane, v.s, v.next_lane, v.x, v.y, v.heading)
        _advance(road, v, v.speed * dt, rng, others)
        if any(boxes_overlap(v.box(), o) for o in others):
            v.lane, v.s, v.next_lane, v.x, v.y, v.heading = saved
            v.speed = 0.0
