"""Discrete-time IF network simulation and TTFS prediction.

The simulator is the executable twin of the SMT constraint system: the
potential at t=0 is pinned to zero, potentials for t >= 1 accumulate the
weighted already-arrived spikes of the previous layer, a neuron spikes tau
steps after its first threshold crossing provided that lands no later than
T-2, and any neuron that never crossed early enough is forced to spike at
the final step T-1.  ``validate_trace`` re-checks every instantiated
conjunct of those rules on a finished trace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    ModelConfig,
    NetworkTrace,
    Prediction,
    SnnModel,
    SpikeTimes,
    UsageError,
    check_spike_times,
)


def simulate(model: SnnModel, input_spikes: SpikeTimes) -> NetworkTrace:
    """Run the network on one input and record the full trace."""
    if input_spikes.layer != 0:
        raise UsageError("simulate expects layer-0 spike times")
    cfg = model.config
    check_spike_times(cfg, input_spikes)
    T, tau, theta = cfg.T, cfg.tau, cfg.theta

    spike_times = [input_spikes]
    potentials: list[np.ndarray] = []
    flags: list[np.ndarray] = []

    s_prev = input_spikes.as_array()
    for l in range(1, cfg.num_layers + 1):
        w = model.weights[l - 1]
        n_cur = cfg.layer_sizes[l]
        p = np.zeros((T, n_cur), dtype=np.float64)
        for t in range(1, T):
            arrived = (s_prev <= t).astype(np.float64)
            p[t] = arrived @ w
        a = np.zeros((T, n_cur), dtype=bool)
        for t in range(1, T):
            a[t] = a[t - 1] | (p[t - 1] >= theta)

        crossed = p >= theta
        has_crossing = crossed.any(axis=0)
        first = np.argmax(crossed, axis=0)  # first t with p >= theta, if any
        s = np.where(has_crossing & (first + tau <= T - 2), first + tau, T - 1)

        potentials.append(p)
        flags.append(a)
        st = SpikeTimes(layer=l, times=tuple(int(x) for x in s))
        spike_times.append(st)
        s_prev = st.as_array()

    return NetworkTrace(spike_times=spike_times, potentials=potentials, spiked_flags=flags)


def predict(trace: NetworkTrace) -> Prediction:
    """TTFS readout of the output layer; ties resolved to the lowest index."""
    out = trace.spike_times[-1].times
    winner_time = min(out)
    label = out.index(winner_time)
    strict = sum(1 for t in out if t == winner_time) == 1
    return Prediction(label=label, winner_time=winner_time, strict=strict)


def infer(model: SnnModel, input_spikes: SpikeTimes) -> Prediction:
    """simulate + predict."""
    return predict(simulate(model, input_spikes))


@dataclass(frozen=True)
class Violation:
    """One falsified constraint conjunct, located by layer/neuron/time."""

    constraint: str
    layer: int
    neuron: int
    time: int | None
    detail: str

    def __str__(self) -> str:
        where = f"l={self.layer} n={self.neuron}" + ("" if self.time is None else f" t={self.time}")
        return f"{self.constraint} [{where}]: {self.detail}"


def validate_trace(model: SnnModel, trace: NetworkTrace) -> list[Violation]:
    """Check a trace against every rule the simulator is defined by.

    Returns an empty list iff the trace satisfies all instantiated
    conjuncts; each violation names the rule (xi1..xi6) and its location.
    """
    cfg = model.config
    T, tau, theta = cfg.T, cfg.tau, cfg.theta
    out: list[Violation] = []

    # xi1: spike-time ranges (input layer uses the [0, T-1] range)
    for l in range(cfg.num_layers + 1):
        lo = tau * l
        for n, s in enumerate(trace.spike_times[l].times):
            if not lo <= s <= T - 1:
                out.append(Violation("xi1", l, n, None, f"s={s} outside [{lo}, {T - 1}]"))

    for l in range(1, cfg.num_layers + 1):
        p = trace.potentials[l - 1]
        a = trace.spiked_flags[l - 1]
        s_prev = trace.spike_times[l - 1].as_array()
        s_cur = trace.spike_times[l].times
        w = model.weights[l - 1]
        n_cur = cfg.layer_sizes[l]

        # xi2: potential starts at zero
        for n in range(n_cur):
            if p[0, n] != 0.0:
                out.append(Violation("xi2", l, n, 0, f"p={p[0, n]} != 0"))

        # xi3: cumulative weighted arrivals
        for t in range(1, T):
            expected = (s_prev <= t).astype(np.float64) @ w
            for n in range(n_cur):
                if p[t, n] != expected[n]:
                    out.append(Violation("xi3", l, n, t, f"p={p[t, n]} expected {expected[n]}"))

        # xi4: flag = some earlier potential reached threshold
        for t in range(T):
            expected_a = (p[:t] >= theta).any(axis=0) if t > 0 else np.zeros(n_cur, bool)
            for n in range(n_cur):
                if bool(a[t, n]) != bool(expected_a[n]):
                    out.append(Violation("xi4", l, n, t, f"a={bool(a[t, n])} expected {bool(expected_a[n])}"))

        # xi5: spike exactly tau after the first in-range crossing
        for t in range(tau * l, T - 1):
            for n in range(n_cur):
                fires = (not a[t - tau, n]) and p[t - tau, n] >= theta
                if fires != (s_cur[n] == t):
                    out.append(Violation("xi5", l, n, t, f"fire-condition {fires} but s={s_cur[n]}"))

        # xi6: forced spike at T-1 iff never crossed early enough
        for n in range(n_cur):
            never = not a[T - 1 - tau, n]
            if never != (s_cur[n] == T - 1):
                out.append(Violation("xi6", l, n, None, f"never-spiked {never} but s={s_cur[n]}"))

    return out
