"""Little-endian checkpoint stream for named tensors.

Layout::

    magic   b"NDGR"
    u32     version
    u32     metadata length, then that many bytes of UTF-8 JSON
    u32     tensor count
    per tensor: u16 name length, name bytes, u8 dtype code, u8 ndim, u32 * ndim shape
    payloads, row-major, in manifest order
"""

from __future__ import annotations

import io
import json
import struct
from typing import BinaryIO

import numpy as np

MAGIC = b"NDGR"
VERSION = 1
_DTYPES = {0: np.dtype("<f4"), 1: np.dtype("<f8")}
_CODES = {np.dtype("float32"): 0, np.dtype("float64"): 1}


class CheckpointError(ValueError):
    pass


def save_params(tensors: dict[str, np.ndarray], metadata: dict | None = None) -> bytes:
    buf = io.BytesIO()
    write_params(buf, tensors, metadata)
    return buf.getvalue()


def write_params(stream: BinaryIO, tensors: dict[str, np.ndarray], metadata: dict | None = None) -> None:
    names = list(tensors)
    if len(set(names)) != len(names):
        raise CheckpointError("tensor names must be unique")
    meta = json.dumps(metadata or {}, sort_keys=True).encode("utf-8")
    stream.write(MAGIC)
    stream.write(struct.pack("<II", VERSION, len(meta)))
    stream.write(meta)
    stream.write(struct.pack("<I", len(names)))
    arrays = []
    for name in names:
        arr = np.asarray(tensors[name])
        if arr.dtype not in _CODES:
            arr = arr.astype(np.float32)
        raw = name.encode("utf-8")
        stream.write(struct.pack("<H", len(raw)))
        stream.write(raw)
        stream.write(struct.pack("<BB", _CODES[arr.dtype], arr.ndim))
        stream.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
        arrays.append(arr)
    for arr in arrays:
        stream.write(np.ascontiguousarray(arr, dtype=arr.dtype.newbyteorder("<")).tobytes())


def _read(stream: BinaryIO, n: int) -> bytes:
    data = stream.read(n)
    if len(data) != n:
        raise CheckpointError("truncated checkpoint stream")
    return data


def read_params(stream: BinaryIO) -> tuple[dict[str, np.ndarray], dict]:
    if _read(stream, 4) != MAGIC:
        raise CheckpointError("bad magic: not a checkpoint stream")
    version, meta_len = struct.unpack("<II", _read(stream, 8))
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    try:
        metadata = json.loads(_read(stream, meta_len).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError("corrupt checkpoint metadata") from exc
    (count,) = struct.unpack("<I", _read(stream, 4))
    manifest = []
    for _ in range(count):
        (nlen,) = struct.unpack("<H", _read(stream, 2))
        name = _read(stream, nlen).decode("utf-8")
        code, ndim = struct.unpack("<BB", _read(stream, 2))
        if code not in _DTYPES:
            raise CheckpointError(f"unknown dtype code {code} for {name}")
        shape = struct.unpack(f"<{ndim}I", _read(stream, 4 * ndim))
        manifest.append((name, _DTYPES[code], shape))
    out = {}
    for name, dtype, shape in manifest:
        nbytes = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
        arr = np.frombuffer(_read(stream, nbytes), dtype=dtype).reshape(shape)
        out[name] = arr.astype(dtype.newbyteorder("="))
    if len(out) != count:
        raise CheckpointError("duplicate tensor names in manifest")
    if stream.read(1):
        raise CheckpointError("trailing bytes after checkpoint payload")
    return out, metadata


def load_params(data: bytes) -> dict[str, np.ndarray]:
    return read_params(io.BytesIO(data))[0]


def load_with_metadata(data: bytes) -> tuple[dict[str, np.ndarray], dict]:
    return read_params(io.BytesIO(data))


def save_file(path, tensors: dict[str, np.ndarray], metadata: dict | None = None) -> None:
    with open(path, "wb") as fh:
        write_params(fh, tensors, metadata)


def load_file(path) -> tuple[dict[str, np.ndarray], dict]:
    with open(path, "rb") as fh:
        return read_params(fh)
