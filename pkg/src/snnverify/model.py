"""Core data types for temporally encoded integrate-and-fire networks."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np


class SnnError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SnnError, ValueError):
    """An argument is outside its mathematical domain."""


class UsageError(SnnError, ValueError):
    """An operation was called with structurally invalid arguments."""


@dataclass(frozen=True)
class ModelConfig:
    """Static parameters of a layered IF network.

    ``layer_sizes`` includes the input layer at index 0.  ``gamma`` is kept
    for completeness but must be 1.0: the constraint encoding has no leak
    term, and the simulator is only equivalent to it for pure IF dynamics.
    """

    T: int
    tau: int
    theta: float
    layer_sizes: tuple[int, ...]
    gamma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "layer_sizes", tuple(int(n) for n in self.layer_sizes))
        if len(self.layer_sizes) < 2:
            raise DomainError("need at least an input and an output layer")
        if any(n <= 0 for n in self.layer_sizes):
            raise DomainError("layer sizes must be positive")
        if self.tau < 1:
            raise DomainError("synaptic delay tau must be a positive integer")
        L = len(self.layer_sizes) - 1
        if self.T < self.tau * L + 1:
            raise DomainError(
                f"T={self.T} too small: need T >= tau*L + 1 = {self.tau * L + 1} "
                "so every layer can spike within the horizon"
            )
        if not self.theta > 0:
            raise DomainError("threshold theta must be positive")
        if self.gamma != 1.0:
            raise DomainError("only gamma=1.0 (IF neurons) is supported")

    @property
    def num_layers(self) -> int:
        """Number of non-input layers L."""
        return len(self.layer_sizes) - 1


@dataclass
class SnnModel:
    """Fully connected layered SNN: config plus one weight matrix per layer.

    ``weights[l]`` has shape (N_l, N_{l+1}); entry (m, n) is the weight from
    neuron m of layer l to neuron n of layer l+1.
    """

    config: ModelConfig
    weights: list[np.ndarray]

    def __post_init__(self):
        sizes = self.config.layer_sizes
        if len(self.weights) != self.config.num_layers:
            raise UsageError(
                f"expected {self.config.num_layers} weight matrices, got {len(self.weights)}"
            )
        ws = []
        for l, w in enumerate(self.weights):
            w = np.asarray(w, dtype=np.float64)
            expected = (sizes[l], sizes[l + 1])
            if w.shape != expected:
                raise UsageError(
                    f"weight matrix {l} has shape {w.shape}, expected {expected}"
                )
            if not np.all(np.isfinite(w)):
                raise DomainError(f"weight matrix {l} contains non-finite values")
            ws.append(w)
        self.weights = ws

    def content_hash(self) -> str:
        """Stable hex digest of config and weights, for report records."""
        h = hashlib.sha256()
        h.update(repr((self.config.T, self.config.tau, self.config.theta,
                       self.config.gamma, self.config.layer_sizes)).encode())
        for w in self.weights:
            h.update(np.ascontiguousarray(w).tobytes())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class SpikeTimes:
    """First-spike times of every neuron in one layer."""

    layer: int
    times: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(int(t) for t in self.times))
        if self.layer < 0:
            raise UsageError("layer index must be non-negative")

    def as_array(self) -> np.ndarray:
        return np.array(self.times, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.times)


def check_spike_times(config: ModelConfig, st: SpikeTimes) -> None:
    """Range-check spike times: tau*l <= t <= T-1 for every entry."""
    if st.layer > config.num_layers:
        raise UsageError(f"layer {st.layer} out of range")
    if len(st) != config.layer_sizes[st.layer]:
        raise UsageError(
            f"layer {st.layer} expects {config.layer_sizes[st.layer]} spike times, got {len(st)}"
        )
    lo = config.tau * st.layer
    for n, t in enumerate(st.times):
        if not lo <= t <= config.T - 1:
            raise DomainError(
                f"spike time {t} of neuron {n} in layer {st.layer} outside [{lo}, {config.T - 1}]"
            )


def input_hash(st: SpikeTimes) -> str:
    """Stable hex digest of an input spike-time vector."""
    h = hashlib.sha256(repr((st.layer, st.times)).encode())
    return h.hexdigest()[:16]


@dataclass
class NetworkTrace:
    """Full simulation record.

    ``potentials[l-1]`` and ``spiked_flags[l-1]`` are (T, N_l) arrays for
    layers l = 1..L; ``spike_times[l]`` covers layers 0..L.
    """

    spike_times: list[SpikeTimes]
    potentials: list[np.ndarray]
    spiked_flags: list[np.ndarray]


@dataclass(frozen=True)
class Prediction:
    """TTFS readout: index and time of the fastest output neuron.

    ``strict`` is True iff no other output neuron ties the winner.
    """

    label: int
    winner_time: int
    strict: bool
