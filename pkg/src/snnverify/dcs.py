"""Direct counterexample search: exhaustive robustness decision by simulation.

Every perturbed input within the budget is simulated; the instance is
robust iff each one yields a strict TTFS win for the expected label.  A
tie at the output layer counts as a counterexample, which keeps the
verdict identical to the satisfiability check of the constraint system
(whose robustness condition uses a strict inequality).
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .model import Prediction, SnnModel, SpikeTimes, UsageError, check_spike_times
from .perturbation import enumerate_perturbations, first_shift_values
from .simulator import predict, simulate


class VerdictKind(str, Enum):
    ROBUST = "Robust"
    NOT_ROBUST = "NotRobust"
    UNKNOWN = "Unknown"


@dataclass
class Verdict:
    kind: VerdictKind
    counterexample: tuple[SpikeTimes, Prediction] | None = None
    reason: str | None = None
    perturbations_checked: int = 0
    wall_time: float = 0.0

    def __post_init__(self):
        if (self.kind == VerdictKind.NOT_ROBUST) != (self.counterexample is not None):
            raise UsageError("NotRobust verdicts carry a counterexample, others do not")


def _is_violation(pred: Prediction, label: int) -> bool:
    return pred.label != label or not pred.strict


def dcs_verify(
    model: SnnModel,
    input_spikes: SpikeTimes,
    label: int,
    delta: int,
    workers: int = 1,
    deterministic: bool = True,
    deadline: float | None = None,
    exact_budget: bool = False,
) -> Verdict:
    """Decide local robustness by checking the whole perturbation set.

    In deterministic mode the returned counterexample is the first in
    lexicographic shift order, regardless of worker count.  ``deadline``
    is a wall-clock budget in seconds; expiry yields an Unknown verdict.
    """
    cfg = model.config
    if not 0 <= label < cfg.layer_sizes[-1]:
        raise UsageError(f"label {label} out of range for {cfg.layer_sizes[-1]} outputs")
    check_spike_times(cfg, input_spikes)
    start = time.perf_counter()
    expiry = None if deadline is None else start + deadline

    if workers <= 1:
        checked = 0
        for cand in enumerate_perturbations(input_spikes, cfg.T, delta, exact_budget=exact_budget):
            if expiry is not None and time.perf_counter() > expiry:
                return Verdict(VerdictKind.UNKNOWN, reason="timeout",
                               perturbations_checked=checked,
                               wall_time=time.perf_counter() - start)
            pred = predict(simulate(model, cand))
            checked += 1
            if _is_violation(pred, label):
                return Verdict(VerdictKind.NOT_ROBUST, counterexample=(cand, pred),
                               perturbations_checked=checked,
                               wall_time=time.perf_counter() - start)
        return Verdict(VerdictKind.ROBUST, perturbations_checked=checked,
                       wall_time=time.perf_counter() - start)

    # Parallel mode: partition the stream by the first neuron's shift.
    found = threading.Event()
    timed_out = threading.Event()

    def scan(shift0: int):
        checked = 0
        for cand in enumerate_perturbations(input_spikes, cfg.T, delta,
                                            exact_budget=exact_budget, fix_first=shift0):
            if expiry is not None and time.perf_counter() > expiry:
                timed_out.set()
                return checked, None
            if not deterministic and found.is_set():
                return checked, None
            pred = predict(simulate(model, cand))
            checked += 1
            if _is_violation(pred, label):
                found.set()
                return checked, (cand, pred)
        return checked, None

    shifts = first_shift_values(input_spikes, cfg.T, delta)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(scan, shifts))

    checked = sum(c for c, _ in results)
    wall = time.perf_counter() - start
    for _, cex in results:  # partitions are in lexicographic order already
        if cex is not None:
            return Verdict(VerdictKind.NOT_ROBUST, counterexample=cex,
                           perturbations_checked=checked, wall_time=wall)
    if timed_out.is_set():
        return Verdict(VerdictKind.UNKNOWN, reason="timeout",
                       perturbations_checked=checked, wall_time=wall)
    return Verdict(VerdictKind.ROBUST, perturbations_checked=checked, wall_time=wall)
