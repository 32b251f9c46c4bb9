"""Seeded model/input generation and the runtime-scaling benchmark harness.

Random weights are drawn from the dyadic grid k/grid with k uniform in
[-grid, grid], using numpy's PCG64 generator so seeded output is identical
across platforms.  Dyadic weights keep the simulator's binary64 sums and
the solver's exact rationals in bit-for-bit agreement.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .dcs import VerdictKind, dcs_verify
from .model import ModelConfig, SnnModel, SpikeTimes, input_hash
from .data_io import ReportRecord, append_report
from .simulator import infer
from . import smt as smt_backend


def gen_model(layer_sizes, T: int, tau: int = 1, theta: float = 1.0,
              seed: int = 0, grid: int = 1024) -> SnnModel:
    """Deterministically generate a random model on the dyadic weight grid."""
    config = ModelConfig(T=T, tau=tau, theta=theta, layer_sizes=tuple(layer_sizes))
    rng = np.random.default_rng(seed)
    weights = []
    for l in range(config.num_layers):
        k = rng.integers(-grid, grid + 1, size=(config.layer_sizes[l], config.layer_sizes[l + 1]))
        weights.append(k.astype(np.float64) / grid)
    return SnnModel(config=config, weights=weights)


def gen_input(config: ModelConfig, seed: int = 0) -> SpikeTimes:
    """Deterministically generate a random layer-0 spike-time vector."""
    rng = np.random.default_rng(seed)
    times = rng.integers(0, config.T, size=config.layer_sizes[0])
    return SpikeTimes(layer=0, times=tuple(int(t) for t in times))


@dataclass
class BenchPlan:
    t_values: list[int]
    hidden_sizes: list[int]
    deltas: list[int]
    methods: list[str] = field(default_factory=lambda: ["dcs"])
    input_size: int = 8
    output_size: int = 2
    repetitions: int = 1
    inputs_per_model: int = 14  # per-model sample count used throughout
    seed: int = 0
    deadline: float | None = None
    solver_command: str | None = None

    def __post_init__(self):
        if not all(v > 0 for v in self.t_values + self.hidden_sizes):
            raise ValueError("grid values must be positive")
        if any(d < 0 for d in self.deltas):
            raise ValueError("deltas must be non-negative")
        for m in self.methods:
            if m not in ("dcs", "smt"):
                raise ValueError(f"unknown method {m!r}")


@dataclass
class BenchCell:
    method: str
    T: int
    hidden: int
    delta: int
    mean_time: float
    std_time: float
    robust: int
    not_robust: int
    unknown: int
    runs: int


@dataclass
class BenchSummary:
    cells: list[BenchCell]

    def to_csv(self) -> str:
        header = "method,T,hidden,delta,mean_time,std_time,robust,not_robust,unknown,runs"
        rows = [header]
        for c in self.cells:
            rows.append(f"{c.method},{c.T},{c.hidden},{c.delta},"
                        f"{c.mean_time:.6g},{c.std_time:.6g},"
                        f"{c.robust},{c.not_robust},{c.unknown},{c.runs}")
        return "\n".join(rows) + "\n"

    def table(self) -> str:
        lines = [f"{'method':<6} {'T':>4} {'hidden':>6} {'delta':>5} "
                 f"{'time (s)':>20} {'R':>3} {'NR':>3} {'U':>3}"]
        for c in self.cells:
            lines.append(f"{c.method:<6} {c.T:>4} {c.hidden:>6} {c.delta:>5} "
                         f"{c.mean_time:>10.4f} ± {c.std_time:<7.4f} "
                         f"{c.robust:>3} {c.not_robust:>3} {c.unknown:>3}")
        return "\n".join(lines)


def run_bench(plan: BenchPlan, report_path=None) -> BenchSummary:
    """Run the grid and summarize wall times per cell (mean ± std).

    Timed-out runs count in the unknown column and are excluded from the
    time statistics.  Cells run sequentially for timing fidelity.
    """
    cells = []
    for method in plan.methods:
        for T in plan.t_values:
            for hidden in plan.hidden_sizes:
                for delta in plan.deltas:
                    times, counts = [], {k: 0 for k in VerdictKind}
                    for rep in range(plan.repetitions):
                        model_seed = (plan.seed * 1_000_003 + T * 9176 + hidden * 131 + rep) & 0x7FFFFFFF
                        model = gen_model([plan.input_size, hidden, plan.output_size],
                                          T=T, seed=model_seed)
                        for i in range(plan.inputs_per_model):
                            x = gen_input(model.config, seed=model_seed + 1000 + i)
                            label = infer(model, x).label
                            start = time.perf_counter()
                            if method == "dcs":
                                v = dcs_verify(model, x, label, delta,
                                               deadline=plan.deadline)
                            else:
                                v = smt_backend.smt_verify(
                                    model, x, label, delta,
                                    solver_command=plan.solver_command,
                                    timeout=plan.deadline)
                            elapsed = time.perf_counter() - start
                            counts[v.kind] += 1
                            if v.kind != VerdictKind.UNKNOWN:
                                times.append(elapsed)
                            if report_path is not None:
                                cex = None
                                if v.counterexample is not None:
                                    cex = list(v.counterexample[0].times)
                                append_report(ReportRecord(
                                    instance_id=f"{method}-T{T}-h{hidden}-d{delta}-r{rep}-i{i}",
                                    method=method, delta=delta, verdict=v.kind.value,
                                    wall_time=elapsed, model_hash=model.content_hash(),
                                    input_hash=input_hash(x), counterexample=cex,
                                    perturbations_checked=v.perturbations_checked or None,
                                ), report_path)
                    mean = statistics.fmean(times) if times else float("nan")
                    std = statistics.pstdev(times) if len(times) > 1 else 0.0
                    cells.append(BenchCell(
                        method=method, T=T, hidden=hidden, delta=delta,
                        mean_time=mean, std_time=std,
                        robust=counts[VerdictKind.ROBUST],
                        not_robust=counts[VerdictKind.NOT_ROBUST],
                        unknown=counts[VerdictKind.UNKNOWN],
                        runs=len(times) + counts[VerdictKind.UNKNOWN]))
    return BenchSummary(cells=cells)


def linear_fit(x, y) -> tuple[float, float, float]:
    """Ordinary least squares y = a*x + b; returns (a, b, R^2)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    a, b = np.polyfit(x, y, 1)
    pred = a * x + b
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(a), float(b), r2
