"""Command-line front end: verify, count, gen-model, bench, import-mnist."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .bench import BenchPlan, gen_model, linear_fit, run_bench
from .dcs import VerdictKind, dcs_verify
from .data_io import (
    FormatError,
    ReportRecord,
    append_report,
    downscale,
    load_idx,
    load_model,
    save_model,
)
from .encoding import encode_intensities
from .model import SnnError, SpikeTimes, input_hash
from .perturbation import count_rate, count_temporal, space_ratio
from .smt import smt_verify

EXIT_ROBUST = 0
EXIT_NOT_ROBUST = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3

_VERDICT_EXIT = {
    VerdictKind.ROBUST: EXIT_ROBUST,
    VerdictKind.NOT_ROBUST: EXIT_NOT_ROBUST,
    VerdictKind.UNKNOWN: EXIT_UNKNOWN,
}


def _parse_int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip() != ""]


def _input_from_args(args, config) -> tuple[SpikeTimes, int | None]:
    if args.times:
        return SpikeTimes(layer=0, times=tuple(_parse_int_list(args.times))), None
    if args.inputs_file:
        with open(args.inputs_file) as f:
            for i, line in enumerate(f):
                if i == args.index:
                    rec = json.loads(line)
                    return SpikeTimes(layer=0, times=tuple(rec["times"])), rec.get("label")
        raise SnnError(f"index {args.index} not found in {args.inputs_file}")
    raise SnnError("provide an input via --times or --inputs-file")


def cmd_verify(args) -> int:
    model = load_model(args.model)
    x, file_label = _input_from_args(args, model.config)
    label = args.label if args.label is not None else file_label
    if label is None:
        raise SnnError("no label given (use --label or an inputs file with labels)")

    if args.method == "dcs":
        verdict = dcs_verify(model, x, label, args.delta, workers=args.workers,
                             deadline=args.deadline,
                             exact_budget=args.compat_exact_delta)
    else:
        verdict = smt_verify(model, x, label, args.delta,
                             solver_command=args.solver, timeout=args.deadline,
                             dump_smt=args.dump_smt)

    print(f"verdict: {verdict.kind.value}")
    if verdict.counterexample is not None:
        cex, pred = verdict.counterexample
        print(f"counterexample times: {list(cex.times)}")
        print(f"adversarial winner: {pred.label} at t={pred.winner_time} "
              f"(strict={pred.strict})")
    if verdict.reason:
        print(f"reason: {verdict.reason}")
    print(f"wall time: {verdict.wall_time:.4f}s")

    if args.report:
        append_report(ReportRecord(
            instance_id=args.instance_id or "cli",
            method=args.method, delta=args.delta, verdict=verdict.kind.value,
            wall_time=verdict.wall_time, model_hash=model.content_hash(),
            input_hash=input_hash(x),
            counterexample=(list(verdict.counterexample[0].times)
                            if verdict.counterexample else None),
            perturbations_checked=verdict.perturbations_checked or None,
        ), args.report)
    return _VERDICT_EXIT[verdict.kind]


def _print_count(name: str, sc) -> None:
    if sc.exact is not None:
        print(f"{name}: {sc.exact} (ln = {sc.ln_value:.6f})")
    else:
        print(f"{name}: ln = {sc.ln_value:.6f} (exact count beyond digit cap)")
    if sc.note:
        print(f"  note: {sc.note}")


def cmd_count(args) -> int:
    if args.encoding in ("temporal", "both"):
        if args.times:
            times = _parse_int_list(args.times)
        else:
            times = [(args.T - 1) // 2] * args.N  # central placement by default
        st = SpikeTimes(layer=0, times=tuple(times))
        _print_count("temporal", count_temporal(st, args.T, args.delta))
    if args.encoding in ("rate", "both"):
        _print_count("rate", count_rate(args.N, args.T, args.delta))
    if args.encoding == "both":
        lnf = space_ratio(args.T, args.N, args.delta)
        print(f"ln f (rate/temporal ratio proxy): {lnf:.6f} (f = {math.exp(lnf):.6g})")
    return 0


def cmd_gen_model(args) -> int:
    model = gen_model(_parse_int_list(args.layers), T=args.T, tau=args.tau,
                      theta=args.theta, seed=args.seed, grid=args.grid)
    save_model(model, args.out, provenance=f"gen-model seed={args.seed} grid={args.grid}")
    print(f"wrote {args.out} ({model.content_hash()})")
    return 0


def cmd_bench(args) -> int:
    plan = BenchPlan(
        t_values=_parse_int_list(args.t_values),
        hidden_sizes=_parse_int_list(args.hidden),
        deltas=_parse_int_list(args.deltas),
        methods=args.methods.split(","),
        input_size=args.input_size,
        output_size=args.output_size,
        repetitions=args.reps,
        inputs_per_model=args.inputs_per_model,
        seed=args.seed,
        deadline=args.deadline,
        solver_command=args.solver,
    )
    summary = run_bench(plan, report_path=args.report)
    print(summary.table())
    if args.summary:
        Path(args.summary).write_text(summary.to_csv())
        print(f"summary written to {args.summary}")
    dcs_cells = [c for c in summary.cells if c.method == "dcs" and not math.isnan(c.mean_time)]
    ts = sorted({c.T for c in dcs_cells})
    if len(ts) >= 3 and len({(c.hidden, c.delta) for c in dcs_cells}) == 1:
        means = [next(c.mean_time for c in dcs_cells if c.T == T) for T in ts]
        slope, intercept, r2 = linear_fit(ts, means)
        print(f"linear fit of mean dcs time vs T: slope={slope:.3e} "
              f"intercept={intercept:.3e} R^2={r2:.4f}")
    return 0


def cmd_import_mnist(args) -> int:
    items = load_idx(args.images, args.labels)
    if args.limit:
        items = items[:args.limit]
    with open(args.out, "w") as f:
        for i, (img, label) in enumerate(items):
            pooled = downscale(img, args.pool)
            st = encode_intensities(pooled.ravel().tolist(), x_max=255.0, T=args.T)
            f.write(json.dumps({"index": i, "label": label,
                                "times": list(st.times)}) + "\n")
    print(f"wrote {len(items)} encoded inputs to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="snnverify",
                                description="Robustness verification for temporally "
                                            "encoded spiking networks")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify one instance with DCS or SMT")
    v.add_argument("--model", required=True)
    v.add_argument("--times", help="comma-separated input spike times")
    v.add_argument("--inputs-file", help="JSON-lines inputs from import-mnist")
    v.add_argument("--index", type=int, default=0, help="line index into --inputs-file")
    v.add_argument("--label", type=int)
    v.add_argument("--delta", type=int, required=True)
    v.add_argument("--method", choices=["dcs", "smt"], default="dcs")
    v.add_argument("--solver", help="SMT solver command (reads SMT-LIB 2 on stdin)")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--deadline", type=float)
    v.add_argument("--dump-smt", help="write the emitted SMT-LIB script here")
    v.add_argument("--compat-exact-delta", action="store_true",
                   help="enumerate total shift exactly delta (pseudocode-compatible)")
    v.add_argument("--report", help="append the verdict to this JSON-lines log")
    v.add_argument("--instance-id")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("count", help="perturbation-space sizes and their ratio")
    c.add_argument("-N", type=int, required=True, help="number of input neurons")
    c.add_argument("-T", type=int, required=True, help="number of time steps")
    c.add_argument("--delta", type=int, required=True)
    c.add_argument("--encoding", choices=["rate", "temporal", "both"], default="both")
    c.add_argument("--times", help="explicit input spike times for the temporal count")
    c.set_defaults(func=cmd_count)

    g = sub.add_parser("gen-model", help="generate a random dyadic-weight model")
    g.add_argument("--layers", required=True, help="comma-separated layer sizes")
    g.add_argument("-T", type=int, required=True)
    g.add_argument("--tau", type=int, default=1)
    g.add_argument("--theta", type=float, default=1.0)
    g.add_argument("--grid", type=int, default=1024,
                   help="weights are k/grid with k in [-grid, grid]")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen_model)

    b = sub.add_parser("bench", help="runtime-scaling study over a grid")
    b.add_argument("--t-values", required=True)
    b.add_argument("--hidden", required=True)
    b.add_argument("--deltas", required=True)
    b.add_argument("--methods", default="dcs")
    b.add_argument("--input-size", type=int, default=8)
    b.add_argument("--output-size", type=int, default=2)
    b.add_argument("--reps", type=int, default=1)
    b.add_argument("--inputs-per-model", type=int, default=14)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--deadline", type=float)
    b.add_argument("--solver")
    b.add_argument("--report", help="raw JSON-lines log path")
    b.add_argument("--summary", help="CSV summary path")
    b.set_defaults(func=cmd_bench)

    m = sub.add_parser("import-mnist", help="encode an IDX dataset as spike times")
    m.add_argument("--images", required=True)
    m.add_argument("--labels", required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--pool", type=int, default=7, help="block-average pooling factor")
    m.add_argument("-T", type=int, default=16)
    m.add_argument("--limit", type=int, default=0)
    m.set_defaults(func=cmd_import_mnist)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SnnError, FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
