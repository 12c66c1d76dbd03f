"""Planar geometry helpers: polylines, oriented boxes, angle wrapping."""

from __future__ import annotations

import math

import numpy as np


def wrap_angle(a: float) -> float:
    """Map an angle to (-pi, pi]."""
    a = math.fmod(a, 2 * math.pi)
    if a <= -math.pi:
        a += 2 * math.pi
    elif a > math.pi:
        a -= 2 * math.pi
    return a


class Polyline:
    """Piecewise-linear path with cumulative arc length."""

    def __init__(self, points):
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise ValueError("a polyline needs at least two 2-D points")
        d = np.hypot(*np.diff(pts, axis=0).T)
        keep = np.concatenate([[True], d > 1e-9])
        self.points = pts[keep]
        seg = np.diff(self.points, axis=0)
        self.seg_len = np.hypot(seg[:, 0], seg[:, 1])
        self.s = np.concatenate([[0.0], np.cumsum(self.seg_len)])
        self.length = float(self.s[-1])
        self._dirs = seg / self.seg_len[:, None]

    def __len__(self) -> int:
        return len(self.points)

    def pose_at(self, s: float) -> tuple[float, float, float]:
        s = min(max(s, 0.0), self.length)
        i = int(np.searchsorted(self.s, s, side="right")) - 1
        i = min(max(i, 0), len(self.seg_len) - 1)
        t = s - self.s[i]
        dx, dy = self._dirs[i]
        x0, y0 = self.points[i]
        return float(x0 + t * dx), float(y0 + t * dy), math.atan2(dy, dx)

    def distance(self, x: float, y: float) -> float:
        return self.project(x, y)[1]

    def project(self, x: float, y: float) -> tuple[float, float]:
        """Arc length of the closest point and the distance to it."""
        a = self.points[:-1]
        rel = np.array([x, y]) - a
        t = np.clip((rel * self._dirs).sum(axis=1), 0.0, self.seg_len)
        closest = a + self._dirs * t[:, None]
        d = np.hypot(closest[:, 0] - x, closest[:, 1] - y)
        i = int(np.argmin(d))
        return float(self.s[i] + t[i]), float(d[i])

    def resample(self, spacing: float) -> "Polyline":
        n = max(1, int(round(self.length / spacing)))
        s = np.linspace(0.0, self.length, n + 1)
        x = np.interp(s, self.s, self.points[:, 0])
        y = np.interp(s, self.s, self.points[:, 1])
        return Polyline(np.stack([x, y], axis=1))


def box_corners(x: float, y: float, heading: float, length: float, width: float) -> list[tuple[float, float]]:
    c, s = math.cos(heading), math.sin(heading)
    hl, hw = length / 2, width / 2
    out = []
    for fl, fw in ((hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw)):
        out.append((x + fl * c - fw * s, y + fl * s + fw * c))
    return out


def boxes_overlap(a, b, margin: float = 0.0) -> bool:
    """Separating-axis test for two oriented boxes ``(x, y, heading, length, width)``.

    ``margin`` inflates both boxes on every side.
    """
    ax, ay, ah, al, aw = a
    bx, by, bh, bl, bw = b
    reach = 0.5 * math.hypot(al, aw) + 0.5 * math.hypot(bl, bw) + 2 * margin
    dx, dy = bx - ax, by - ay
    if dx * dx + dy * dy > reach * reach:
        return False
    axes = []
    for h in (ah, bh):
        c, s = math.cos(h), math.sin(h)
        axes.append((c, s))
        axes.append((-s, c))
    ca, sa = math.cos(ah), math.sin(ah)
    cb, sb = math.cos(bh), math.sin(bh)
    for ux, uy in axes:
        ra = (al / 2 + margin) * abs(ca * ux + sa * uy) + (aw / 2 + margin) * abs(-sa * ux + ca * uy)
        rb = (bl / 2 + margin) * abs(cb * ux + sb * uy) + (bw / 2 + margin) * abs(-sb * ux + cb * uy)
        if abs(dx * ux + dy * uy) > ra + rb:
            return False
    return True


def quad_bezier(p0, p1, p2, n: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n)[:, None]
    p0, p1, p2 = (np.asarray(p, dtype=np.float64) for p in (p0, p1, p2))
    return (1 - t) ** 2 * p0 + 2 * (1 - t) * t * p1 + t**2 * p2


def line_intersection(p, u, q, v) -> np.ndarray:
    """Intersection of the lines p + a*u and q + b*v."""
    m = np.array([[u[0], -v[0]], [u[1], -v[1]]], dtype=np.float64)
    a, _ = np.linalg.solve(m, np.asarray(q, float) - np.asarray(p, float))
    return np.asarray(p, float) + a * np.asarray(u, float)
