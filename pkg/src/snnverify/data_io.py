"""Persistence: model files, IDX dataset loading, pooling, report logs.

Models are stored as JSON with decimal weights; JSON's shortest-round-trip
float formatting makes load(save(m)) bitwise identical.  Reports are
append-only JSON lines, one record per verification run.
"""

from __future__ import annotations

import json
import struct
import threading
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np

from .model import ModelConfig, SnnError, SnnModel, SpikeTimes, UsageError

MODEL_FORMAT_VERSION = 1

IDX_MAGIC_IMAGES = 0x00000803
IDX_MAGIC_LABELS = 0x00000801


class FormatError(SnnError):
    """A file does not match its declared format."""


def save_model(model: SnnModel, path: str | Path, provenance: str | None = None) -> None:
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "config": {
            "T": model.config.T,
            "tau": model.config.tau,
            "theta": model.config.theta,
            "gamma": model.config.gamma,
            "layer_sizes": list(model.config.layer_sizes),
        },
        "weights": [w.tolist() for w in model.weights],
    }
    if provenance:
        doc["provenance"] = provenance
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_model(path: str | Path) -> SnnModel:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise FormatError(f"{path}: unknown or missing format_version")
    try:
        c = doc["config"]
        config = ModelConfig(T=c["T"], tau=c["tau"], theta=c["theta"],
                             gamma=c.get("gamma", 1.0),
                             layer_sizes=tuple(c["layer_sizes"]))
        weights = [np.array(w, dtype=np.float64) for w in doc["weights"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed model document: {exc}") from exc
    return SnnModel(config=config, weights=weights)


def _read_exact(f, n: int, what: str) -> bytes:
    data = f.read(n)
    if len(data) != n:
        raise FormatError(f"truncated IDX file while reading {what}")
    return data


def load_idx(images_path: str | Path, labels_path: str | Path) -> list[tuple[np.ndarray, int]]:
    """Load an IDX image/label pair (the MNIST container format).

    Returns (H x W uint8 image, label) tuples; pixel values are preserved
    exactly and labels must lie in 0..9.
    """
    with open(images_path, "rb") as f:
        magic, count, rows, cols = struct.unpack(">IIII", _read_exact(f, 16, "image header"))
        if magic != IDX_MAGIC_IMAGES:
            raise FormatError(f"{images_path}: bad image magic 0x{magic:08x}")
        payload = _read_exact(f, count * rows * cols, "image payload")
    images = np.frombuffer(payload, dtype=np.uint8).reshape(count, rows, cols)

    with open(labels_path, "rb") as f:
        magic, label_count = struct.unpack(">II", _read_exact(f, 8, "label header"))
        if magic != IDX_MAGIC_LABELS:
            raise FormatError(f"{labels_path}: bad label magic 0x{magic:08x}")
        labels = np.frombuffer(_read_exact(f, label_count, "label payload"), dtype=np.uint8)

    if count != label_count:
        raise FormatError(f"image count {count} != label count {label_count}")
    if labels.size and labels.max() > 9:
        raise FormatError(f"label {labels.max()} outside 0..9")
    return [(images[i], int(labels[i])) for i in range(count)]


def downscale(grid: np.ndarray, factor: int) -> np.ndarray:
    """Block-average pooling by an integer factor dividing both dimensions."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 2:
        raise UsageError("expected a 2-D grid")
    h, w = grid.shape
    if factor < 1 or h % factor or w % factor:
        raise UsageError(f"factor {factor} does not divide grid shape {grid.shape}")
    return grid.reshape(h // factor, factor, w // factor, factor).mean(axis=(1, 3))


@dataclass
class ReportRecord:
    instance_id: str
    method: str  # "dcs" | "smt"
    delta: int
    verdict: str
    wall_time: float
    model_hash: str
    input_hash: str
    counterexample: list[int] | None = None
    perturbations_checked: int | None = None


_append_lock = threading.Lock()


def append_report(record: ReportRecord, path: str | Path) -> None:
    line = json.dumps(asdict(record), sort_keys=True)
    with _append_lock:
        with open(path, "a") as f:
            f.write(line + "\n")


def read_report(path: str | Path) -> list[ReportRecord]:
    records = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                records.append(ReportRecord(**json.loads(line)))
    return records
