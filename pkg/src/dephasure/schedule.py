"""Instantaneous pi-pulse schedules."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["PulseSchedule", "uniform", "pulses_applied"]


@dataclass(frozen=True)
class PulseSchedule:
    """Ordered pulse instants in scaled time.

    Pulses are ideal: zero duration, an exact pi rotation of both spins.
    A pulse sitting exactly at time ``t`` counts as applied at ``t``.
    """

    times: tuple[float, ...] = ()
    uniform_interval: float | None = None

    def __post_init__(self):
        times = tuple(float(x) for x in self.times)
        if any(not math.isfinite(x) for x in times):
            raise ValueError("pulse times must be finite")
        if times and times[0] <= 0:
            raise ValueError("pulse times must be positive")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("pulse times must be strictly increasing")
        object.__setattr__(self, "times", times)

    @classmethod
    def uniform(cls, tau_s: float, horizon: float) -> "PulseSchedule":
        return uniform(tau_s, horizon)

    @property
    def is_uniform(self) -> bool:
        return self.uniform_interval is not None

    def __len__(self):
        return len(self.times)

    def pulses_applied(self, t: float) -> int:
        return pulses_applied(self, t)

    def until(self, t: float) -> np.ndarray:
        """Pulse instants ``<= t`` as an array."""
        return np.asarray(self.times[:self.pulses_applied(t)], dtype=float)


def uniform(tau_s: float, horizon: float) -> PulseSchedule:
    """Equal-interval train with pulses at ``m * tau_s <= horizon``."""
    if not (math.isfinite(tau_s) and tau_s > 0):
        raise ValueError(f"tau_s must be positive, got {tau_s!r}")
    if horizon < 0:
        raise ValueError(f"horizon must be non-negative, got {horizon!r}")
    n = int(math.floor(horizon / tau_s))
    # floor() of the float ratio can be off by one against m * tau_s itself
    while (n + 1) * tau_s <= horizon:
        n += 1
    while n > 0 and n * tau_s > horizon:
        n -= 1
    return PulseSchedule(tuple(m * tau_s for m in range(1, n + 1)), tau_s)


def pulses_applied(sched: PulseSchedule, t: float) -> int:
    """Number of pulses at times ``<= t``."""
    return bisect.bisect_right(sched.times, t)
