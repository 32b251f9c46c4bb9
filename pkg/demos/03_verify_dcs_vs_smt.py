"""Verify the same instance with both decision procedures.

The exhaustive search simulates every input within the budget; the SMT
route emits the constraint system to an external solver and replays any
sat model through the simulator.  Their verdicts always agree.

Needs a solver: either a native z3 on PATH or `npm install` at the repo
root for the bundled WebAssembly build.
"""

from snnverify import (
    VerdictKind,
    build_constraints,
    dcs_verify,
    default_solver_command,
    emit_smtlib,
    infer,
    smt_verify,
)
from snnverify.bench import gen_input, gen_model

solver = default_solver_command()
print("solver command:", solver)

agreements = 0
for seed in range(5):
    model = gen_model([4, 3, 2], T=5, seed=seed)
    x = gen_input(model.config, seed=100 + seed)
    label = infer(model, x).label

    d = dcs_verify(model, x, label, delta=1)
    s = smt_verify(model, x, label, delta=1, solver_command=solver)
    mark = "==" if d.kind == s.kind else "!!"
    agreements += d.kind == s.kind
    print(f"seed {seed}: dcs={d.kind.value:10s} {mark} smt={s.kind.value:10s} "
          f"(dcs checked {d.perturbations_checked} inputs in {d.wall_time:.3f}s, "
          f"solver took {s.wall_time:.2f}s)")
    if d.kind == VerdictKind.NOT_ROBUST:
        print(f"         first counterexample: {d.counterexample[0].times} -> "
              f"winner {d.counterexample[1].label}")

print(f"\n{agreements}/5 verdicts agree")

model = gen_model([4, 3, 2], T=5, seed=0)
x = gen_input(model.config, seed=100)
script = emit_smtlib(build_constraints(model, x, infer(model, x).label, 1))
print(f"\nthe emitted SMT-LIB script has {script.count('(assert')} assertions; head:")
print("\n".join(script.splitlines()[:8]))
