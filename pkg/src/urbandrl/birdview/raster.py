"""Ego-aligned bird-view rasterization.

A frame is drawn as a label image (one role code per pixel) with PIL and
then colored through a lookup table, so every full-resolution pixel holds
exactly one role color.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageDraw

from ..drivesim.geometry import box_corners
from ..drivesim.roadmap import RoadMap

FOV_M = 40.0
EGO_LATERAL_M = 20.0
EGO_REAR_M = 8.0
FULL_RES = 256
OUT_RES = 64
ROUTE_WIDTH_M = 2.0
DRIVABLE_GRAY = 0.5
BRIGHTNESS = (0.4, 0.6, 0.8, 1.0)     # oldest -> newest

# label codes
BACKGROUND, DRIVABLE, ROUTE = 0, 1, 2
OBJECT_BASE = 3                      # 3..6, index into BRIGHTNESS
EGO_BASE = OBJECT_BASE + len(BRIGHTNESS)


def _palette() -> np.ndarray:
    lut = np.zeros((256, 3), dtype=np.float32)
    lut[DRIVABLE] = DRIVABLE_GRAY
    lut[ROUTE] = (0.0, 0.0, 1.0)
    for i, b in enumerate(BRIGHTNESS):
        lut[OBJECT_BASE + i] = (0.0, b, 0.0)
        lut[EGO_BASE + i] = (b, 0.0, 0.0)
    return lut


PALETTE = _palette()


# ------------------------------------------------------------------ history
Box = tuple[float, float, float, float, float]


@dataclass(frozen=True)
class Snapshot:
    ego: Box
    objects: tuple[Box, ...]


class HistoryBuffer:
    """Sliding window of world snapshots.

    Snapshots may be pushed every simulation frame; ``snapshots()`` returns
    at most ``length`` of them spaced ``stride`` pushes apart (oldest first),
    always ending with the newest one.
    """

    def __init__(self, length: int = 4, stride: int = 1):
        if length < 1 or stride < 1:
            raise ValueError("history length and stride must be positive")
        self.length = length
        self.stride = stride
        self._items: deque[Snapshot] = deque(maxlen=(length - 1) * stride + 1)

    def push(self, snap: Snapshot) -> "HistoryBuffer":
        self._items.append(snap)
        return self

    def clear(self) -> None:
        self._items.clear()

    def snapshots(self) -> list[Snapshot]:
        items = list(self._items)
        picked = items[::-1][:: self.stride][: self.length]
        return picked[::-1]

    def __len__(self) -> int:
        return len(self.snapshots())

    @property
    def newest(self) -> Snapshot:
        if not self._items:
            raise IndexError("history is empty")
        return self._items[-1]


def snapshot_of(world) -> Snapshot:
    return Snapshot(world.ego.box(), tuple(v.box() for v in world.traffic))


def push_history(buffer: HistoryBuffer, world) -> HistoryBuffer:
    return buffer.push(snapshot_of(world))


# ---------------------------------------------------------------- transform
def pixel_scale(resolution: int) -> float:
    return resolution / FOV_M


def world_to_pixel(points, ego_pose, resolution: int = FULL_RES) -> np.ndarray:
    """Map world points (N, 2) to (column, row) pixel coordinates.

    The ego sits at the lateral center, ``EGO_REAR_M`` above the bottom edge,
    facing up. Points outside the view come back out of range.
    """
    if resolution not in (FULL_RES, OUT_RES):
        raise ValueError(f"resolution must be {FULL_RES} or {OUT_RES}, got {resolution}")
    p = np.asarray(points, dtype=np.float64)
    single = p.ndim == 1
    p = np.atleast_2d(p)
    ex, ey, eh = ego_pose[0], ego_pose[1], ego_pose[2]
    c, s = math.cos(eh), math.sin(eh)
    dx, dy = p[:, 0] - ex, p[:, 1] - ey
    fwd = dx * c + dy * s
    left = -dx * s + dy * c
    k = pixel_scale(resolution)
    col = (EGO_LATERAL_M - left) * k
    row = (FOV_M - EGO_REAR_M - fwd) * k
    out = np.stack([col, row], axis=1)
    return out[0] if single else out


# ------------------------------------------------------------------ drawing
def _poly(draw: ImageDraw.ImageDraw, pts: np.ndarray, label: int) -> None:
    draw.polygon([(float(u), float(v)) for u, v in pts], fill=label)


def _circle(draw, center_px, radius_px: float, label: int) -> None:
    u, v = center_px
    draw.ellipse([u - radius_px, v - radius_px, u + radius_px, v + radius_px], fill=label)


def render_labels(road: RoadMap, history: HistoryBuffer, resolution: int = FULL_RES) -> np.ndarray:
    """Label image (resolution, resolution) uint8 in draw order map, route,
    object history, ego history."""
    snaps = history.snapshots()
    if not snaps:
        raise ValueError("render needs at least the current snapshot in the history")
    ego_pose = snaps[-1].ego[:3]
    k = pixel_scale(resolution)
    img = Image.new("L", (resolution, resolution), BACKGROUND)
    draw = ImageDraw.Draw(img)

    center = world_to_pixel((0.0, 0.0), ego_pose, resolution)
    _circle(draw, center, (road.ring_radius + road.half_width) * k, DRIVABLE)
    _circle(draw, center, (road.ring_radius - road.half_width) * k, BACKGROUND)
    for rect in road.arm_rectangles():
        _poly(draw, world_to_pixel(rect, ego_pose, resolution), DRIVABLE)

    route_px = world_to_pixel(road.route.points, ego_pose, resolution)
    draw.line([(float(u), float(v)) for u, v in route_px], fill=ROUTE,
              width=max(1, int(round(ROUTE_WIDTH_M * k))), joint="curve")

    # brightness index counts back from the newest snapshot
    offset = len(BRIGHTNESS) - len(snaps)
    for i, snap in enumerate(snaps):
        for box in snap.objects:
            _poly(draw, world_to_pixel(box_corners(*box), ego_pose, resolution), OBJECT_BASE + offset + i)
    for i, snap in enumerate(snaps):
        _poly(draw, world_to_pixel(box_corners(*snap.ego), ego_pose, resolution), EGO_BASE + offset + i)
    return np.asarray(img, dtype=np.uint8)


def colorize(labels: np.ndarray) -> np.ndarray:
    return PALETTE[labels]


def downsample(image: np.ndarray, factor: int = FULL_RES // OUT_RES) -> np.ndarray:
    """Box-average ``factor`` x ``factor`` blocks; preserves the image mean."""
    h, w, c = image.shape
    if h % factor or w % factor:
        raise ValueError(f"image size {h}x{w} not divisible by {factor}")
    blocks = image.astype(np.float64).reshape(h // factor, factor, w // factor, factor, c)
    return blocks.mean(axis=(1, 3)).astype(np.float32)


def render_full(road: RoadMap, history: HistoryBuffer) -> np.ndarray:
    return colorize(render_labels(road, history, FULL_RES))


def render(road: RoadMap, history: HistoryBuffer) -> np.ndarray:
    """64x64x3 float32 observation in [0, 1]."""
    return downsample(render_full(road, history))
