"""Constraint-system construction, SMT-LIB 2 emission, and solver orchestration.

The robustness query is the conjunction of the network-behavior rules,
the perturbation-budget rule, and the negated strict-win condition; it is
satisfiable exactly when an adversarial counterexample exists.  Formulas
are built as s-expression trees over integer spike variables, real
potential variables, and boolean spiked flags, then serialized to a
byte-stable SMT-LIB 2 script for any compliant solver process.
"""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .model import ModelConfig, SnnModel, SpikeTimes, SnnError, UsageError, \
    check_spike_times, input_hash
from .dcs import Verdict, VerdictKind, _is_violation
from .simulator import predict, simulate


class SolverError(SnnError):
    """The solver process could not be run."""


class DecodeError(SnnError):
    """A sat model could not be decoded into spike times."""


class EncodingError(SnnError):
    """The solver's model disagrees with the simulator: an encoding bug."""


# ---------------------------------------------------------------------------
# formula trees

Expr = tuple | str | int | Fraction


def _render(e: Expr) -> str:
    if isinstance(e, tuple):
        return "(" + " ".join(_render(x) for x in e) + ")"
    if isinstance(e, bool):
        return "true" if e else "false"
    if isinstance(e, int):
        return str(e) if e >= 0 else f"(- {-e})"
    if isinstance(e, Fraction):
        num, den = e.numerator, e.denominator
        body = f"{abs(num)}.0" if den == 1 else f"(/ {abs(num)}.0 {den}.0)"
        return body if num >= 0 else f"(- {body})"
    return e


def _conj(terms: list[Expr]) -> Expr:
    if not terms:
        return "true"
    return terms[0] if len(terms) == 1 else ("and", *terms)


def _disj(terms: list[Expr]) -> Expr:
    if not terms:
        return "false"
    return terms[0] if len(terms) == 1 else ("or", *terms)


def _sum(terms: list[Expr]) -> Expr:
    if not terms:
        return 0
    return terms[0] if len(terms) == 1 else ("+", *terms)


@dataclass(frozen=True)
class Assertion:
    origin: str  # xi1 .. xi7, neg_xi8
    expr: Expr


@dataclass
class ConstraintSystem:
    declarations: list[tuple[str, str]]  # (name, sort), in declaration order
    assertions: list[Assertion]
    metadata: dict = field(default_factory=dict)

    def names(self) -> set[str]:
        return {n for n, _ in self.declarations}


def _s(l: int, n: int) -> str:
    return f"s_{l}_{n}"


def _p(l: int, t: int, n: int) -> str:
    return f"p_{l}_{t}_{n}"


def _a(l: int, t: int, n: int) -> str:
    return f"a_{l}_{t}_{n}"


def build_constraints(model: SnnModel, input_spikes: SpikeTimes, label: int,
                      delta: int) -> ConstraintSystem:
    """Instantiate the full robustness query for one instance.

    The negated strict-win condition is asserted, so a sat answer
    witnesses an adversarial input.
    """
    cfg = model.config
    if not 0 <= label < cfg.layer_sizes[-1]:
        raise UsageError(f"label {label} out of range")
    if delta < 0:
        raise UsageError("delta must be non-negative")
    check_spike_times(cfg, input_spikes)
    T, tau, L = cfg.T, cfg.tau, cfg.num_layers
    theta = Fraction(cfg.theta)
    sizes = cfg.layer_sizes

    decls: list[tuple[str, str]] = []
    for n in range(sizes[0]):
        decls.append((_s(0, n), "Int"))
    for l in range(1, L + 1):
        for n in range(sizes[l]):
            decls.append((_s(l, n), "Int"))
    for l in range(1, L + 1):
        for t in range(T):
            for n in range(sizes[l]):
                decls.append((_p(l, t, n), "Real"))
    for l in range(1, L + 1):
        for t in range(T):
            for n in range(sizes[l]):
                decls.append((_a(l, t, n), "Bool"))
    for n in range(sizes[0]):
        decls.append((f"d_{n}", "Int"))

    asserts: list[Assertion] = []

    # xi1: spike-time ranges (input layer ranges over the whole horizon)
    for n in range(sizes[0]):
        asserts.append(Assertion("xi1", ("and", (">=", _s(0, n), 0), ("<=", _s(0, n), T - 1))))
    for l in range(1, L + 1):
        for n in range(sizes[l]):
            asserts.append(Assertion(
                "xi1", ("and", (">=", _s(l, n), tau * l), ("<=", _s(l, n), T - 1))))

    # xi2: potentials start at zero
    for l in range(1, L + 1):
        for n in range(sizes[l]):
            asserts.append(Assertion("xi2", ("=", _p(l, 0, n), Fraction(0))))

    # xi3: potential accumulates weighted arrived spikes
    for l in range(1, L + 1):
        w = model.weights[l - 1]
        for n in range(sizes[l]):
            for t in range(1, T):
                terms = [("ite", ("<=", _s(l - 1, m), t), Fraction(w[m, n]), Fraction(0))
                         for m in range(sizes[l - 1])]
                asserts.append(Assertion("xi3", ("=", _p(l, t, n), _sum(terms))))

    # xi4: flag records any earlier threshold crossing (empty at t=0)
    for l in range(1, L + 1):
        for n in range(sizes[l]):
            asserts.append(Assertion("xi4", ("=", _a(l, 0, n), "false")))
            for t in range(1, T):
                crossings = [(">=", _p(l, tp, n), theta) for tp in range(t)]
                asserts.append(Assertion("xi4", ("=", _a(l, t, n), _disj(crossings))))

    # xi5: first crossing at t - tau fires the neuron at t
    for l in range(1, L + 1):
        for n in range(sizes[l]):
            for t in range(tau * l, T - 1):
                cond = ("and", ("not", _a(l, t - tau, n)), (">=", _p(l, t - tau, n), theta))
                asserts.append(Assertion("xi5", ("=", cond, ("=", _s(l, n), t))))

    # xi6: forced spike at the last step iff never crossed early enough
    for l in range(1, L + 1):
        for n in range(sizes[l]):
            asserts.append(Assertion(
                "xi6", ("=", ("not", _a(l, T - 1 - tau, n)), ("=", _s(l, n), T - 1))))

    # xi7: L1 budget on the input shift, linearized with helper distances
    for n, x_n in enumerate(input_spikes.times):
        asserts.append(Assertion("xi7", (">=", f"d_{n}", ("-", _s(0, n), x_n))))
        asserts.append(Assertion("xi7", (">=", f"d_{n}", ("-", x_n, _s(0, n)))))
        asserts.append(Assertion("xi7", (">=", f"d_{n}", 0)))
    asserts.append(Assertion(
        "xi7", ("<=", _sum([f"d_{n}" for n in range(sizes[0])]), delta)))

    # negated robustness: some competitor spikes no later than the label
    competitors = [("<=", _s(L, n), _s(L, label))
                   for n in range(sizes[-1]) if n != label]
    asserts.append(Assertion("neg_xi8", _disj(competitors)))

    meta = {
        "model_hash": model.content_hash(),
        "input_hash": input_hash(input_spikes),
        "delta": delta,
        "label": label,
    }
    return ConstraintSystem(declarations=decls, assertions=asserts, metadata=meta)


def emit_smtlib(cs: ConstraintSystem) -> str:
    """Serialize to a byte-stable SMT-LIB 2 script."""
    lines = [
        f"; robustness query: model={cs.metadata.get('model_hash')} "
        f"input={cs.metadata.get('input_hash')} delta={cs.metadata.get('delta')} "
        f"label={cs.metadata.get('label')}",
        "(set-option :produce-models true)",
        "(set-logic QF_LIRA)",
    ]
    for name, sort in cs.declarations:
        lines.append(f"(declare-const {name} {sort})")
    current = None
    for a in cs.assertions:
        if a.origin != current:
            lines.append(f"; {a.origin}")
            current = a.origin
        lines.append(f"(assert {_render(a.expr)})")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# solver orchestration

@dataclass
class SolverOutcome:
    status: str  # sat | unsat | unknown
    assignment: dict[str, int | Fraction | bool] | None
    raw: str
    wall_time: float
    reason: str | None = None


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _parse_sexprs(tokens: list[str]) -> list:
    out = []
    stack = [out]
    for tok in tokens:
        if tok == "(":
            new: list = []
            stack[-1].append(new)
            stack.append(new)
        elif tok == ")":
            if len(stack) == 1:
                raise DecodeError("unbalanced parentheses in solver output")
            stack.pop()
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise DecodeError("unbalanced parentheses in solver output")
    return out


def _eval_value(v):
    if isinstance(v, list):
        if not v:
            raise DecodeError("empty value expression")
        if v[0] == "-" and len(v) == 2:
            return -_eval_value(v[1])
        if v[0] == "/" and len(v) == 3:
            return Fraction(_eval_value(v[1])) / Fraction(_eval_value(v[2]))
        raise DecodeError(f"unsupported value expression {v!r}")
    if v == "true":
        return True
    if v == "false":
        return False
    try:
        return int(v)
    except ValueError:
        pass
    try:
        return Fraction(v)
    except ValueError as exc:
        raise DecodeError(f"unsupported literal {v!r}") from exc


def _parse_model(text: str) -> dict:
    assignment: dict = {}
    forms = _parse_sexprs(_tokenize(text))

    def visit(form):
        if not isinstance(form, list):
            return
        if len(form) >= 5 and form[0] == "define-fun" and form[2] == []:
            assignment[form[1]] = _eval_value(form[4])
            return
        for item in form:
            visit(item)

    for form in forms:
        if isinstance(form, list) and form[:1] == ["model"]:
            form = form[1:]
        visit(form if isinstance(form, list) else [form])
    return assignment


def solve(script: str, solver_command: str, timeout: float | None = None) -> SolverOutcome:
    """Run an external SMT-LIB 2 solver process on the script.

    The command gets the script on standard input and must answer with
    sat/unsat/unknown; on sat the get-model output is decoded into an
    assignment map.
    """
    argv = shlex.split(solver_command)
    start = time.perf_counter()
    try:
        proc = subprocess.run(argv, input=script.encode(), capture_output=True,
                              timeout=timeout)
    except FileNotFoundError as exc:
        raise SolverError(f"solver command not found: {argv[0]}") from exc
    except subprocess.TimeoutExpired:
        return SolverOutcome("unknown", None, "", time.perf_counter() - start,
                             reason="timeout")
    wall = time.perf_counter() - start
    raw = proc.stdout.decode(errors="replace")

    status = None
    rest_index = 0
    for line in raw.splitlines(keepends=True):
        rest_index += len(line)
        if line.strip() in ("sat", "unsat", "unknown"):
            status = line.strip()
            break
    if status is None:
        return SolverOutcome("unknown", None, raw, wall,
                             reason=f"malformed solver output: {raw[:200]!r}")
    assignment = None
    if status == "sat":
        assignment = _parse_model(raw[rest_index:])
    return SolverOutcome(status, assignment, raw, wall)


def extract_counterexample(outcome: SolverOutcome, config: ModelConfig) -> SpikeTimes:
    """Read the input-layer spike times out of a sat assignment."""
    if outcome.status != "sat" or outcome.assignment is None:
        raise UsageError("counterexamples exist only for sat outcomes")
    times = []
    for n in range(config.layer_sizes[0]):
        name = _s(0, n)
        if name not in outcome.assignment:
            raise DecodeError(f"solver model is missing {name}")
        v = outcome.assignment[name]
        if isinstance(v, Fraction):
            if v.denominator != 1:
                raise DecodeError(f"{name} is not integral: {v}")
            v = v.numerator
        if isinstance(v, bool) or not isinstance(v, int):
            raise DecodeError(f"{name} has non-integer value {v!r}")
        times.append(v)
    return SpikeTimes(layer=0, times=tuple(times))


def default_solver_command() -> str:
    """Locate a usable SMT-LIB 2 solver command.

    Resolution order: the SNNVERIFY_SOLVER environment variable, a native
    ``z3`` on PATH, then the bundled node wrapper around the z3-solver npm
    package (requires ``npm install`` at the repository root).
    """
    env = os.environ.get("SNNVERIFY_SOLVER")
    if env:
        return env
    z3 = shutil.which("z3")
    if z3:
        return f"{z3} -in"
    node = shutil.which("node")
    script = Path(__file__).resolve().parent / "_solver" / "z3_smtlib2.js"
    if node and script.exists():
        for parent in script.parents:
            if (parent / "node_modules" / "z3-solver").is_dir():
                return f"{node} {script}"
    raise SolverError(
        "no SMT solver found: set SNNVERIFY_SOLVER, install z3, or run "
        "'npm install' at the repository root to fetch the bundled z3 build"
    )


def smt_verify(model: SnnModel, input_spikes: SpikeTimes, label: int, delta: int,
               solver_command: str | None = None, timeout: float | None = None,
               dump_smt: str | os.PathLike | None = None) -> Verdict:
    """Decide robustness through the solver and replay any counterexample.

    A sat model is decoded and re-simulated; if the replay does not show a
    non-strict win against the label, the encoding itself is broken and an
    EncodingError is raised rather than returning a bogus verdict.
    """
    if solver_command is None:
        solver_command = default_solver_command()
    cs = build_constraints(model, input_spikes, label, delta)
    script = emit_smtlib(cs)
    if dump_smt is not None:
        Path(dump_smt).write_text(script)
    outcome = solve(script, solver_command, timeout=timeout)
    if outcome.status == "unsat":
        return Verdict(VerdictKind.ROBUST, wall_time=outcome.wall_time)
    if outcome.status == "unknown":
        return Verdict(VerdictKind.UNKNOWN, reason=outcome.reason or "solver returned unknown",
                       wall_time=outcome.wall_time)

    cex = extract_counterexample(outcome, model.config)
    l1 = sum(abs(a - b) for a, b in zip(cex.times, input_spikes.times))
    if l1 > delta:
        raise EncodingError(f"solver model violates the budget: L1={l1} > {delta}")
    pred = predict(simulate(model, cex))
    if not _is_violation(pred, label):
        raise EncodingError(
            "solver model replays to a strict win for the label; encoding and "
            "simulator disagree"
        )
    return Verdict(VerdictKind.NOT_ROBUST, counterexample=(cex, pred),
                   wall_time=outcome.wall_time)
