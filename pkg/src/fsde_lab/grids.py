"""Uniform time grids and reproducible random streams.

All processes in the package live on a shared uniform grid with nodes
t_j = j*dt, j = 0..n_steps.  Randomness is drawn from counter-based
Philox streams keyed by ``(seed, stream_id)`` so that ensembles are
reproducible path by path, independent of execution order or worker
count.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid with n_steps+1 nodes, t_0 = 0."""

    dt: float
    n_steps: int

    def __post_init__(self):
        if not (self.dt > 0 and np.isfinite(self.dt)):
            raise DomainError(f"dt must be positive and finite, got {self.dt}")
        if not (isinstance(self.n_steps, (int, np.integer)) and self.n_steps >= 1):
            raise DomainError(f"n_steps must be a positive integer, got {self.n_steps}")
        object.__setattr__(self, "n_steps", int(self.n_steps))

    @property
    def horizon(self):
        """Final time t_{n_steps}."""
        return self.dt * self.n_steps

    def times(self):
        """Node times as an array of length n_steps+1."""
        return np.arange(self.n_steps + 1) * self.dt

    def refined(self, factor=2):
        """Grid with the same horizon and ``factor`` times more steps."""
        return TimeGrid(self.dt / factor, self.n_steps * factor)


@dataclass(frozen=True)
class RngSpec:
    """Keyed random stream: (seed, stream_id) fully determines every draw."""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)):
                raise DomainError(f"{name} must be an integer, got {type(v).__name__}")
            if not 0 <= int(v) < 2**64:
                raise DomainError(f"{name} must fit in 64 bits, got {v}")
            object.__setattr__(self, name, int(v))

    def generator(self):
        """Fresh counter-based generator for this (seed, stream_id) pair."""
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, stream_id):
        """Sibling stream with the same seed and a different stream id."""
        return RngSpec(self.seed, stream_id)


def check_same_grid(a: TimeGrid, b: TimeGrid, what="inputs"):
    """Raise ContractError unless the two grids are identical."""
    if a != b:
        raise ContractError(f"{what} must share one grid, got {a} vs {b}")
