"""Perturbation sets under an L1 budget: enumeration, exact counts, analytics.

Temporal perturbations shift integer spike times within [0, T-1] with a
total-shift budget; rate perturbations flip bits of an N x T spike train.
Counts are exact big integers, paired with a natural-log value so that
astronomically large rate counts stay comparable.
"""

from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass

from .model import DomainError, SpikeTimes, UsageError

# Counts beyond this many decimal digits are reported in log form only.
EXACT_DIGIT_CAP = 10_000


@dataclass(frozen=True)
class SpaceCount:
    """Exact set cardinality plus its natural log (−inf for zero)."""

    exact: int | None
    ln_value: float
    note: str | None = None


def _space_count(n: int, note: str | None = None) -> SpaceCount:
    ln = math.log(n) if n > 0 else float("-inf")
    if n > 0 and n.bit_length() * math.log10(2) > EXACT_DIGIT_CAP:
        return SpaceCount(exact=None, ln_value=ln, note=note or "exact count exceeds digit cap")
    return SpaceCount(exact=n, ln_value=ln, note=note)


def _check_budget(delta: int) -> int:
    delta = int(delta)
    if delta < 0:
        raise DomainError("perturbation budget must be non-negative")
    return delta


def enumerate_perturbations(
    input_spikes: SpikeTimes,
    T: int,
    delta: int,
    exact_budget: bool = False,
    fix_first: int | None = None,
) -> Iterator[SpikeTimes]:
    """Yield every perturbed input within the budget, in lexicographic order.

    The order is lexicographic on the shift vector (perturbed minus
    original), so the unperturbed input appears exactly once, where all
    shifts are zero.  ``exact_budget=True`` reproduces the pseudocode
    variant that spends the whole budget (total shift exactly delta).
    ``fix_first`` restricts the stream to one value of the first neuron's
    shift, which partitions the full stream for parallel consumption.
    """
    if input_spikes.layer != 0:
        raise UsageError("perturbations are defined on layer-0 spike times")
    delta = _check_budget(delta)
    s = input_spikes.times
    n_in = len(s)
    for t in s:
        if not 0 <= t <= T - 1:
            raise DomainError(f"input spike time {t} outside [0, {T - 1}]")

    shifted = list(s)

    def gen(i: int, budget: int) -> Iterator[tuple[int, ...]]:
        if i == n_in:
            if not exact_budget or budget == 0:
                yield tuple(shifted)
            return
        lo = -min(s[i], budget)
        hi = min(T - 1 - s[i], budget)
        if i == 0 and fix_first is not None:
            if lo <= fix_first <= hi:
                lo = hi = fix_first
            else:
                return
        for d in range(lo, hi + 1):
            shifted[i] = s[i] + d
            yield from gen(i + 1, budget - abs(d))
        shifted[i] = s[i]

    for times in gen(0, delta):
        yield SpikeTimes(layer=0, times=times)


def first_shift_values(input_spikes: SpikeTimes, T: int, delta: int) -> list[int]:
    """Feasible shifts of neuron 0, i.e. the partition keys for ``fix_first``."""
    delta = _check_budget(delta)
    s0 = input_spikes.times[0]
    return list(range(-min(s0, delta), min(T - 1 - s0, delta) + 1))


def count_temporal(input_spikes: SpikeTimes, T: int, delta: int) -> SpaceCount:
    """Exact size of the temporal perturbation set, boundary clamping included.

    Dynamic program over (neuron, spent budget); the per-neuron shift range
    is clamped to [-s_n, T-1-s_n] exactly as the enumeration clamps it, so
    the two can never diverge.
    """
    if input_spikes.layer != 0:
        raise UsageError("perturbations are defined on layer-0 spike times")
    delta = _check_budget(delta)
    ways = [0] * (delta + 1)
    ways[0] = 1
    for s_n in input_spikes.times:
        if not 0 <= s_n <= T - 1:
            raise DomainError(f"input spike time {s_n} outside [0, {T - 1}]")
        down, up = s_n, T - 1 - s_n  # max feasible shift magnitudes
        nxt = [0] * (delta + 1)
        for spent in range(delta + 1):
            if ways[spent] == 0:
                continue
            for cost in range(delta - spent + 1):
                mult = 1 if cost == 0 else (cost <= down) + (cost <= up)
                if mult:
                    nxt[spent + cost] += ways[spent] * mult
        ways = nxt
    return _space_count(sum(ways))


def count_rate(N: int, T: int, delta: int) -> SpaceCount:
    """Size of the rate-encoding perturbation set: sum of C(N*T, d), d=1..delta.

    The sum deliberately starts at d=1, excluding the unperturbed train.
    A budget larger than N*T is clamped to the all-flips case.
    """
    if N < 1 or T < 1:
        raise DomainError("N and T must be positive")
    delta = _check_budget(delta)
    cap = min(delta, N * T)
    note = f"budget clamped from {delta} to {cap}" if cap < delta else None
    # incremental C(M, d+1) = C(M, d) * (M - d) / (d + 1); math.comb per term
    # is far too slow for dataset-scale M
    M = N * T
    total, term = 0, 1
    for d in range(1, cap + 1):
        term = term * (M - d + 1) // d
        total += term
    return _space_count(total, note=note)


def temporal_upper_bound(N: int, delta: int) -> SpaceCount:
    """Closed-form upper bound on any temporal count with N input neurons.

    exact holds the budget-partition factor C(N+delta-1, delta); ln_value
    adds the per-partition shift factor N*ln(1 + 2*delta/N), so the log is
    the full bound while the integer part alone is already exact.
    """
    if N < 1:
        raise DomainError("N must be positive")
    delta = _check_budget(delta)
    partitions = math.comb(N + delta - 1, delta)
    ln = math.log(partitions) + N * math.log1p(2 * delta / N)
    return SpaceCount(exact=partitions, ln_value=ln)


def space_ratio(T: int, N: int, delta: float) -> float:
    """ln of the rate/temporal perturbation-space ratio f = T^d / (1+2d/N)^N.

    Evaluated in the log domain; ``delta`` may be fractional for analytic
    sweeps over the relative budget.
    """
    if T < 1 or N < 1:
        raise DomainError("T and N must be positive")
    if delta < 0:
        raise DomainError("perturbation budget must be non-negative")
    return delta * math.log(T) - N * math.log1p(2 * delta / N)
