"""Frame file formats: binary PPM and the raw frame dataset."""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

DATASET_MAGIC = b"BVDS"
_HEADER = struct.Struct("<4sIHHH")   # magic, count, height, width, channels


def to_bytes(frame: np.ndarray) -> np.ndarray:
    """Quantize a [0, 1] float frame to uint8."""
    f = np.asarray(frame)
    if f.dtype == np.uint8:
        return f
    return np.clip(np.rint(f * 255.0), 0, 255).astype(np.uint8)


def from_bytes(frames: np.ndarray) -> np.ndarray:
    return frames.astype(np.float32) / np.float32(255.0)


def write_ppm(path, frame: np.ndarray) -> None:
    img = to_bytes(frame)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"PPM needs an (H, W, 3) frame, got {img.shape}")
    h, w, _ = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(img).tobytes())


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    fields, pos = [], 0
    while len(fields) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while end < len(data) and not data[end:end + 1].isspace():
            end += 1
        fields.append(data[pos:end])
        pos = end
    magic, w, h, maxval = fields[0], int(fields[1]), int(fields[2]), int(fields[3])
    if magic != b"P6" or maxval != 255:
        raise ValueError(f"unsupported PPM header {magic!r} maxval {maxval}")
    pixels = data[pos + 1:pos + 1 + w * h * 3]
    if len(pixels) != w * h * 3:
        raise ValueError("truncated PPM payload")
    return np.frombuffer(pixels, dtype=np.uint8).reshape(h, w, 3).copy()


def write_dataset(path, frames) -> int:
    """Write uint8 (N, H, W, 3) frames behind a small header; returns N."""
    arr = np.stack([to_bytes(f) for f in frames]) if not isinstance(frames, np.ndarray) else to_bytes(frames)
    if arr.ndim != 4:
        raise ValueError(f"dataset frames must be (N, H, W, C), got {arr.shape}")
    n, h, w, c = arr.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(DATASET_MAGIC, n, h, w, c))
        fh.write(np.ascontiguousarray(arr).tobytes())
    return n


def read_dataset_header(path) -> tuple[int, int, int, int]:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
    if len(head) != _HEADER.size:
        raise ValueError(f"{path}: file too short for a dataset header")
    magic, n, h, w, c = _HEADER.unpack(head)
    if magic != DATASET_MAGIC:
        raise ValueError(f"{path}: bad dataset magic {magic!r}")
    return n, h, w, c


def read_dataset(path) -> np.ndarray:
    """uint8 frames (N, H, W, C)."""
    n, h, w, c = read_dataset_header(path)
    raw = Path(path).read_bytes()[_HEADER.size:]
    if len(raw) != n * h * w * c:
        raise ValueError(f"{path}: payload holds {len(raw)} bytes, header promises {n * h * w * c}")
    return np.frombuffer(raw, dtype=np.uint8).reshape(n, h, w, c).copy()
