"""Intensity-to-spike-time (latency) encoding of real-valued inputs."""

from __future__ import annotations

import math
from collections.abc import Sequence

from .model import DomainError, SpikeTimes


def encode_intensities(values: Sequence[float], x_max: float, T: int) -> SpikeTimes:
    """Encode intensities in [0, x_max] as input-layer spike times.

    Larger intensities spike earlier: s = round((1 - v/x_max) * (T-1)),
    rounding halves up.  The map is antitone and covers [0, T-1] exactly.
    """
    if x_max <= 0:
        raise DomainError("x_max must be positive")
    if T < 2:
        raise DomainError("need at least two time steps")
    times = []
    for v in values:
        if not 0 <= v <= x_max:
            raise DomainError(f"intensity {v} outside [0, {x_max}]")
        t = math.floor((1.0 - v / x_max) * (T - 1) + 0.5)
        times.append(min(max(t, 0), T - 1))
    return SpikeTimes(layer=0, times=tuple(times))
