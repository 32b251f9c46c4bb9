import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from snnverify import (
    SpikeTimes,
    count_rate,
    count_temporal,
    enumerate_perturbations,
    space_ratio,
    temporal_upper_bound,
)
from snnverify.model import DomainError
from snnverify.perturbation import first_shift_values

from oracle import rate_count_brute, temporal_set_brute


def times_of(stream):
    return [s.times for s in stream]


def test_single_neuron_budget_one():
    got = times_of(enumerate_perturbations(SpikeTimes(0, (1,)), T=3, delta=1))
    assert got == [(0,), (1,), (2,)]


def test_two_neurons_budget_one():
    got = times_of(enumerate_perturbations(SpikeTimes(0, (1, 1)), T=3, delta=1))
    assert got == [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)]


def test_zero_budget_is_singleton():
    got = times_of(enumerate_perturbations(SpikeTimes(0, (0,)), T=3, delta=0))
    assert got == [(0,)]


def test_exact_budget_mode_drops_smaller_masses():
    got = times_of(enumerate_perturbations(SpikeTimes(0, (1, 1)), T=3, delta=1,
                                           exact_budget=True))
    assert got == [(0, 1), (1, 0), (1, 2), (2, 1)]


def test_partitioned_streams_cover_the_whole_set():
    x = SpikeTimes(0, (1, 2, 0))
    full = times_of(enumerate_perturbations(x, T=4, delta=2))
    parts = []
    for d0 in first_shift_values(x, T=4, delta=2):
        parts.extend(times_of(enumerate_perturbations(x, T=4, delta=2, fix_first=d0)))
    assert parts == full


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=2, max_value=5).flatmap(
           lambda T: st.tuples(st.just(T),
                               st.lists(st.integers(0, T - 1), min_size=1, max_size=3))),
       st.integers(min_value=0, max_value=3))
def test_enumeration_matches_brute_force(T_times, delta):
    T, times = T_times
    x = SpikeTimes(0, tuple(times))
    got = times_of(enumerate_perturbations(x, T, delta))
    expected = temporal_set_brute(times, T, delta)
    assert sorted(got) == sorted(expected)
    assert got == sorted(got)          # lexicographic order on shifted times too,
    assert len(set(got)) == len(got)   # since the original vector is fixed
    assert count_temporal(x, T, delta).exact == len(expected)


def test_count_examples():
    assert count_temporal(SpikeTimes(0, (0,)), T=3, delta=2).exact == 3
    assert count_temporal(SpikeTimes(0, (1, 1)), T=3, delta=1).exact == 5
    assert count_temporal(SpikeTimes(0, (2, 5, 0)), T=7, delta=0).exact == 1


def test_count_rate_examples():
    assert count_rate(1, 2, 1).exact == 2
    assert count_rate(2, 3, 2).exact == 21
    assert count_rate(3, 5, 0).exact == 0
    assert count_rate(3, 5, 0).ln_value == float("-inf")


def test_count_rate_matches_brute_force():
    for N, T in [(1, 3), (2, 3), (2, 4), (3, 4), (2, 6)]:
        for delta in range(4):
            assert count_rate(N, T, delta).exact == rate_count_brute(N, T, delta)


def test_count_rate_clamps_oversized_budget():
    sc = count_rate(1, 2, 99)
    assert sc.exact == 2 ** 2 - 1  # all non-empty flip sets of 2 bits
    assert sc.note and "clamped" in sc.note


def test_count_rate_huge_instance_reports_log_only():
    sc = count_rate(784, 256, 5000)
    assert sc.exact is None
    assert math.isfinite(sc.ln_value) and sc.ln_value > 0


def test_negative_budget_rejected():
    with pytest.raises(DomainError):
        count_temporal(SpikeTimes(0, (1,)), 3, -1)


def test_upper_bound_small_cases():
    b = temporal_upper_bound(2, 1)
    assert b.exact == 2  # C(2, 1) delta partitions
    assert math.isclose(b.ln_value, math.log(8))
    assert b.ln_value >= count_temporal(SpikeTimes(0, (1, 1)), 3, 1).ln_value

    degenerate = temporal_upper_bound(1, 0)
    assert degenerate.exact == 1 and degenerate.ln_value == 0.0

    b10 = temporal_upper_bound(10, 1)
    assert math.isclose(b10.ln_value, math.log(10) + 10 * math.log(1.2))


def test_upper_bound_dominates_exact_counts():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        N = int(rng.integers(1, 7))
        T = int(rng.integers(2, 7))
        delta = int(rng.integers(0, 5))
        times = tuple(int(t) for t in rng.integers(0, T, N))
        exact = count_temporal(SpikeTimes(0, times), T, delta)
        bound = temporal_upper_bound(N, delta)
        assert bound.ln_value >= exact.ln_value - 1e-12, (N, T, delta, times)


def test_space_ratio_reference_point():
    assert math.isclose(space_ratio(5, 10, 1), math.log(5) - 10 * math.log(1.2),
                        abs_tol=1e-12)
    assert space_ratio(5, 10, 1) < 0  # rate space smaller here: small relative budget


def test_space_ratio_zero_budget():
    for T in (1, 5, 64):
        assert space_ratio(T, 7, 0) == 0.0


def test_log_ratio_increases_with_relative_budget_for_T_at_least_8():
    # numeric check of the positive derivative in the relative budget
    h = 1e-6
    for T in (8, 12, 32):
        for N in (4, 16):
            for alpha in np.arange(0.05, 0.51, 0.05):
                up = space_ratio(T, N, (alpha + h) * T * N)
                down = space_ratio(T, N, (alpha - h) * T * N)
                assert (up - down) / (2 * h) > 0


def test_monotone_gap_over_T_grid():
    # at fixed N and relative budget, the log-ratio grows with T >= 8
    for N in (4, 16):
        for alpha in (0.1, 0.25, 0.5):
            vals = [space_ratio(T, N, alpha * T * N) for T in range(8, 33)]
            assert all(b >= a for a, b in zip(vals, vals[1:]))
