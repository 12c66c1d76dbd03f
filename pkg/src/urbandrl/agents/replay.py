"""Fixed-capacity FIFO replay storage with uniform sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Batch:
    state: np.ndarray
    action: np.ndarray
    reward: np.ndarray
    next_state: np.ndarray
    done: np.ndarray

    def __len__(self) -> int:
        return len(self.reward)


class ReplayBuffer:
    def __init__(self, capacity: int, state_dim: int, action_shape: tuple = (), discrete: bool = False,
                 rng: np.random.Generator | None = None, dtype=np.float32):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.state = np.zeros((capacity, state_dim), dtype=dtype)
        self.next_state = np.zeros((capacity, state_dim), dtype=dtype)
        self.action = np.zeros((capacity, *action_shape), dtype=np.int64 if discrete else dtype)
        self.reward = np.zeros(capacity, dtype=dtype)
        self.done = np.zeros(capacity, dtype=dtype)
        self._next = 0
        self.size = 0

    def __len__(self) -> int:
        return self.size

    def push(self, state, action, reward: float, next_state, done: bool) -> None:
        i = self._next
        self.state[i] = state
        self.action[i] = action
        self.reward[i] = reward
        self.next_state[i] = next_state
        self.done[i] = float(done)
        self._next = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def indices_in_age_order(self) -> np.ndarray:
        """Storage slots from oldest to newest."""
        if self.size < self.capacity:
            return np.arange(self.size)
        return (np.arange(self.capacity) + self._next) % self.capacity

    def sample_indices(self, n: int) -> np.ndarray:
        if n > self.size:
            raise ValueError(f"cannot sample {n} transitions from a buffer holding {self.size}")
        return self.rng.integers(0, self.size, size=n)

    def sample(self, n: int) -> Batch:
        idx = self.sample_indices(n)
        return Batch(self.state[idx], self.action[idx], self.reward[idx], self.next_state[idx], self.done[idx])


def buffer_push(buffer: ReplayBuffer, transition) -> ReplayBuffer:
    buffer.push(*transition)
    return buffer


def buffer_sample(buffer: ReplayBuffer, n: int) -> Batch:
    return buffer.sample(n)
