"""Bird-view observation: map, route, fading object and ego history."""

from .env import BirdViewEnv
from .io import (DATASET_MAGIC, from_bytes, read_dataset, read_dataset_header, read_ppm, to_bytes,
                 write_dataset, write_ppm)
from .raster import (BRIGHTNESS, DRIVABLE, DRIVABLE_GRAY, EGO_BASE, FULL_RES, OBJECT_BASE, OUT_RES,
                     PALETTE, ROUTE, HistoryBuffer, Snapshot, colorize, downsample, pixel_scale,
                     push_history, render, render_full, render_labels, snapshot_of, world_to_pixel)

__all__ = [
    "BRIGHTNESS", "BirdViewEnv", "DATASET_MAGIC", "DRIVABLE", "DRIVABLE_GRAY", "EGO_BASE", "FULL_RES", "HistoryBuffer",
    "OBJECT_BASE", "OUT_RES", "PALETTE", "ROUTE", "Snapshot", "colorize", "downsample", "from_bytes",
    "pixel_scale", "push_history", "read_dataset", "read_dataset_header", "read_ppm", "render",
    "render_full", "render_labels", "snapshot_of", "to_bytes", "world_to_pixel", "write_dataset", "write_ppm",
]
