"""Roundabout road network: ring, four two-way arms, lane graph and ego route."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Polyline, line_intersection, quad_bezier

CHECKPOINTS = ("entrance", "first_exit", "second_exit", "desired_exit", "goal_point")

# arm k points outward along ARM_ANGLES[k]; counter-clockwise order, south first
ARM_ANGLES = (-math.pi / 2, 0.0, math.pi / 2, math.pi)
ARM_NAMES = ("south", "east", "north", "west")

LANE_SPACING = 0.25


@dataclass
class Lane:
    name: str
    path: Polyline
    successors: list[str] = field(default_factory=list)
    # arc length on this lane before which an entering vehicle must yield
    yield_s: float | None = None
    merge_angle: float | None = None


@dataclass
class RoadMap:
    ring_radius: float
    half_width: float
    arm_length: float
    lane_offset: float
    merge_angle: float
    lanes: dict[str, Lane]
    route: Polyline
    route_lanes: list[str]
    checkpoints: dict[str, tuple[float, float]]
    checkpoint_s: dict[str, float]

    def is_drivable(self, xy) -> np.ndarray:
        """Vectorized membership test for the drivable area."""
        p = np.atleast_2d(np.asarray(xy, dtype=np.float64))
        r = np.hypot(p[:, 0], p[:, 1])
        R, hw = self.ring_radius, self.half_width
        inside = (r >= R - hw) & (r <= R + hw)
        for theta in ARM_ANGLES:
            u = np.array([math.cos(theta), math.sin(theta)])
            n = np.array([-u[1], u[0]])
            along = p @ u
            lat = p @ n
            inside |= (along >= R - hw / 2) & (along <= R + self.arm_length) & (np.abs(lat) <= hw)
        return inside

    def arm_rectangles(self) -> list[np.ndarray]:
        """Corner arrays (4, 2) of the arm rectangles, in world meters."""
        R, hw = self.ring_radius, self.half_width
        rects = []
        for theta in ARM_ANGLES:
            u = np.array([math.cos(theta), math.sin(theta)])
            n = np.array([-u[1], u[0]])
            a0, a1 = R - hw / 2, R + self.arm_length
            rects.append(np.array([a0 * u + hw * n, a1 * u + hw * n, a1 * u - hw * n, a0 * u - hw * n]))
        return rects

    def polygons(self, n_arc: int = 96) -> list[np.ndarray]:
        """Drivable area as polygons: the ring as ``n_arc`` quads plus the arms."""
        R, hw = self.ring_radius, self.half_width
        ang = np.linspace(0, 2 * math.pi, n_arc + 1)
        quads = []
        for a0, a1 in zip(ang[:-1], ang[1:]):
            quads.append(np.array([
                [(R - hw) * math.cos(a0), (R - hw) * math.sin(a0)],
                [(R + hw) * math.cos(a0), (R + hw) * math.sin(a0)],
                [(R + hw) * math.cos(a1), (R + hw) * math.sin(a1)],
                [(R - hw) * math.cos(a1), (R - hw) * math.sin(a1)],
            ]))
        return quads + self.arm_rectangles()

    def lane_points(self) -> list[np.ndarray]:
        return [lane.path.points for lane in self.lanes.values()]


def _ring_point(R: float, phi: float) -> np.ndarray:
    return np.array([R * math.cos(phi), R * math.sin(phi)])


def _ring_tangent(phi: float) -> np.ndarray:
    # counter-clockwise circulation
    return np.array([-math.sin(phi), math.cos(phi)])


def _arc(R: float, phi0: float, phi1: float) -> np.ndarray:
    if phi1 < phi0:
        phi1 += 2 * math.pi
    n = max(2, int(math.ceil(R * (phi1 - phi0) / LANE_SPACING)) + 1)
    phi = np.linspace(phi0, phi1, n)
    return np.stack([R * np.cos(phi), R * np.sin(phi)], axis=1)


def _straight(p0, p1) -> np.ndarray:
    p0, p1 = np.asarray(p0, float), np.asarray(p1, float)
    n = max(2, int(math.ceil(np.hypot(*(p1 - p0)) / LANE_SPACING)) + 1)
    t = np.linspace(0, 1, n)[:, None]
    return p0 + t * (p1 - p0)


def _join(*parts: np.ndarray) -> np.ndarray:
    out = [parts[0]]
    for p in parts[1:]:
        out.append(p[1:] if np.allclose(out[-1][-1], p[0]) else p)
    return np.concatenate(out)


def build_roundabout(ring_radius: float = 20.0, arm_length: float = 40.0, half_width: float = 4.0) -> RoadMap:
    """Ring road with four two-way arms; the ego route enters from the south
    arm, passes the east and north exits and leaves through the west arm."""
    R, L, hw = float(ring_radius), float(arm_length), float(half_width)
    if R < 10:
        raise ValueError(f"ring radius must be at least 10 m, got {R}")
    if not (0 < hw <= R / 2.5):
        raise ValueError(f"half width {hw} is degenerate for ring radius {R}")
    if L < 2 * hw + 5:
        raise ValueError(f"arm length {L} too short")
    off = hw / 2
    beta = math.radians(min(40.0, math.degrees(math.asin(min(1.0, 2.1 * hw / R)))))
    r_conn = R + 2 * hw

    lanes: dict[str, Lane] = {}
    for k, theta in enumerate(ARM_ANGLES):
        u = np.array([math.cos(theta), math.sin(theta)])
        right_in = np.array([-u[1], u[0]])   # right-hand side when heading toward the ring
        right_out = -right_in
        # inbound: straight, then a tangent-continuous curve onto the ring
        start = (R + L) * u + off * right_in
        conn0 = r_conn * u + off * right_in
        phi_in = theta + beta
        q = _ring_point(R, phi_in)
        ctrl = line_intersection(conn0, -u, q, _ring_tangent(phi_in))
        n_curve = max(8, int(np.hypot(*(q - conn0)) / LANE_SPACING) * 2)
        pts_in = _join(_straight(start, conn0), quad_bezier(conn0, ctrl, q, n_curve))
        path_in = Polyline(pts_in)
        lanes[f"in{k}"] = Lane(f"in{k}", path_in, [f"ringA{k}"],
                               yield_s=float(np.hypot(*(start - conn0))), merge_angle=phi_in)
        # outbound: leave the ring tangentially, then straight out
        phi_out = theta - beta
        p = _ring_point(R, phi_out)
        conn1 = r_conn * u + off * right_out
        end = (R + L) * u + off * right_out
        ctrl = line_intersection(p, _ring_tangent(phi_out), conn1, u)
        n_curve = max(8, int(np.hypot(*(conn1 - p)) / LANE_SPACING) * 2)
        lanes[f"out{k}"] = Lane(f"out{k}", Polyline(_join(quad_bezier(p, ctrl, conn1, n_curve),
                                                           _straight(conn1, end))), [])
        lanes[f"ringB{k}"] = Lane(f"ringB{k}", Polyline(_arc(R, phi_out, phi_in)), [f"ringA{k}"])
    for k, theta in enumerate(ARM_ANGLES):
        nxt = (k + 1) % 4
        lanes[f"ringA{k}"] = Lane(
            f"ringA{k}", Polyline(_arc(R, theta + beta, ARM_ANGLES[nxt] - beta)),
            [f"out{nxt}", f"ringB{nxt}"],
        )

    route_lanes = ["in0", "ringA0", "ringB1", "ringA1", "ringB2", "ringA2", "out3"]
    dense = _join(*(lanes[name].path.points for name in route_lanes))
    route = Polyline(dense).resample(1.0)

    checkpoints = {
        "entrance": tuple(lanes["in0"].path.points[-1]),
        "first_exit": tuple(_ring_point(R, ARM_ANGLES[1])),
        "second_exit": tuple(_ring_point(R, ARM_ANGLES[2])),
        "desired_exit": tuple(lanes["out3"].path.points[0]),
        "goal_point": tuple(route.points[-1]),
    }
    checkpoint_s = {name: route.project(*pt)[0] for name, pt in checkpoints.items()}
    return RoadMap(R, hw, L, off, beta, lanes, route, route_lanes,
                   {k: (float(v[0]), float(v[1])) for k, v in checkpoints.items()}, checkpoint_s)
