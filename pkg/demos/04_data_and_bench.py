"""Round-trip model files, import an IDX image set, and run a small bench.

Writes everything into a temporary directory so the demo is side-effect
free.  The IDX fixture is synthetic (four 8x8 "images"), but the parser
is the same one used for the real MNIST files.
"""

import struct
import tempfile
from pathlib import Path

import numpy as np

from snnverify import encode_intensities, infer
from snnverify.bench import BenchPlan, gen_model, run_bench
from snnverify.data_io import downscale, load_idx, load_model, read_report, save_model

work = Path(tempfile.mkdtemp(prefix="snnverify-demo-"))

# --- model files round-trip bit-exactly -------------------------------
model = gen_model([4, 3, 2], T=6, seed=42)
save_model(model, work / "model.json", provenance="demo 04")
reloaded = load_model(work / "model.json")
print("model round-trip hash match:", model.content_hash() == reloaded.content_hash())

# --- IDX parsing + pooling + temporal encoding ------------------------
rng = np.random.default_rng(0)
images = rng.integers(0, 256, size=(4, 8, 8), dtype=np.uint8)
labels = np.array([3, 1, 4, 1], dtype=np.uint8)
(work / "imgs.idx").write_bytes(
    struct.pack(">IIII", 0x803, 4, 8, 8) + images.tobytes())
(work / "lbls.idx").write_bytes(
    struct.pack(">II", 0x801, 4) + labels.tobytes())

pairs = load_idx(work / "imgs.idx", work / "lbls.idx")
img, lbl = pairs[0]
pooled = downscale(img, 2)                       # 8x8 -> 4x4 block means
spikes = encode_intensities(pooled.ravel(), T=6, x_max=255.0)
print(f"image 0 (label {lbl}) pooled to {pooled.shape}, "
      f"spike times: {spikes.times}")

wide = gen_model([16, 6, 10], T=6, seed=7)
print("prediction on encoded image:", infer(wide, spikes).label)

# --- a tiny benchmark grid --------------------------------------------
plan = BenchPlan(t_values=[5, 6], hidden_sizes=[3], deltas=[1],
                 repetitions=1, inputs_per_model=4, seed=1)
summary = run_bench(plan, report_path=work / "report.jsonl")
print("\n" + summary.table())
print(f"\n{len(read_report(work / 'report.jsonl'))} report records written "
      f"to {work / 'report.jsonl'}")
