// Minimal SMT-LIB 2 solver process backed by the z3-solver npm package
// (z3 compiled to WebAssembly). Reads a full script on stdin, prints the
// solver's answer (sat/unsat/unknown plus any model) on stdout.
//
// The z3-solver package is resolved relative to this file, so a plain
// `npm install` at the repository root is enough.

const { init } = require('z3-solver');

let input = '';
process.stdin.setEncoding('utf8');
process.stdin.on('data', chunk => { input += chunk; });
process.stdin.on('end', async () => {
  try {
    const { Z3 } = await init();
    const cfg = Z3.mk_config();
    const ctx = Z3.mk_context(cfg);
    const out = await Z3.eval_smtlib2_string(ctx, input);
    process.stdout.write(out.endsWith('\n') ? out : out + '\n');
    process.exit(0);
  } catch (err) {
    process.stdout.write('unknown\n; error: ' + String(err).replace(/\n/g, ' ') + '\n');
    process.exit(0);
  }
});
