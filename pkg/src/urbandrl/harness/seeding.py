"""Named random substreams derived from one run seed."""

from __future__ import annotations

import zlib

import numpy as np


class SeedBank:
    """Hands out independent generators keyed by name.

    The same (seed, name) pair always yields the same sequence, and a name
    can be requested once only so two consumers never share a stream.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._issued: set[str] = set()

    def stream(self, name: str) -> np.random.Generator:
        if name in self._issued:
            raise RuntimeError(f"random stream {name!r} was already issued")
        self._issued.add(name)
        key = zlib.crc32(name.encode("utf-8"))
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(key,)))

    @property
    def used(self) -> bool:
        return bool(self._issued)


_GLOBAL: SeedBank | None = None


def set_global_seed(seed: int) -> SeedBank:
    """Install the process-wide bank. Reseeding after a stream has been
    drawn is an error; reseeding an untouched bank is allowed."""
    global _GLOBAL
    if _GLOBAL is not None and _GLOBAL.used:
        raise RuntimeError("global seed already in use; reseeding mid-run is not allowed")
    _GLOBAL = SeedBank(seed)
    return _GLOBAL


def global_stream(name: str) -> np.random.Generator:
    if _GLOBAL is None:
        raise RuntimeError("set_global_seed() must be called before drawing random streams")
    return _GLOBAL.stream(name)


def reset_global_seed() -> None:
    """Forget the installed bank (start of a fresh run in the same process)."""
    global _GLOBAL
    _GLOBAL = None


def draw_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**31 - 1))
