import struct

import numpy as np
import pytest

from snnverify import ModelConfig, SnnModel, SpikeTimes, load_idx, load_model, save_model
from snnverify.bench import gen_model
from snnverify.data_io import (
    FormatError,
    ReportRecord,
    append_report,
    downscale,
    read_report,
)
from snnverify.model import UsageError


def test_model_round_trip_bitwise(tmp_path):
    model = gen_model([5, 4, 3], T=8, seed=123)
    path = tmp_path / "m.json"
    save_model(model, path, provenance="test")
    loaded = load_model(path)
    assert loaded.config == model.config
    for a, b in zip(loaded.weights, model.weights):
        assert np.array_equal(a, b)  # exact, not approximate


def test_model_round_trip_survives_reserialization(tmp_path):
    model = gen_model([3, 2], T=5, seed=7)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_model(model, p1)
    save_model(load_model(p1), p2)
    assert p1.read_text() == p2.read_text()


def test_handwritten_minimal_model(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text("""
    {"format_version": 1,
     "config": {"T": 4, "tau": 1, "theta": 1.0, "layer_sizes": [2, 1]},
     "weights": [[[0.6], [0.6]]]}
    """)
    model = load_model(path)
    assert model.config == ModelConfig(T=4, tau=1, theta=1.0, layer_sizes=(2, 1))
    assert model.weights[0].tolist() == [[0.6], [0.6]]


def test_unknown_version_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"format_version": 99}')
    with pytest.raises(FormatError):
        load_model(path)


def test_shape_mismatch_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("""
    {"format_version": 1,
     "config": {"T": 4, "tau": 1, "theta": 1.0, "layer_sizes": [2, 1]},
     "weights": [[[0.6]]]}
    """)
    with pytest.raises((FormatError, UsageError)):
        load_model(path)


# --- IDX -------------------------------------------------------------------

def write_idx(tmp_path, images, labels, image_magic=0x803, label_magic=0x801):
    images = np.asarray(images, dtype=np.uint8)
    labels = np.asarray(labels, dtype=np.uint8)
    ip = tmp_path / "imgs.idx"
    lp = tmp_path / "labels.idx"
    with open(ip, "wb") as f:
        f.write(struct.pack(">IIII", image_magic, images.shape[0],
                            images.shape[1], images.shape[2]))
        f.write(images.tobytes())
    with open(lp, "wb") as f:
        f.write(struct.pack(">II", label_magic, labels.shape[0]))
        f.write(labels.tobytes())
    return ip, lp


def test_idx_round_trip_position_exact(tmp_path):
    rng = np.random.default_rng(0)
    images = rng.integers(0, 256, size=(3, 28, 28), dtype=np.uint8)
    labels = np.array([3, 1, 9], dtype=np.uint8)
    ip, lp = write_idx(tmp_path, images, labels)
    items = load_idx(ip, lp)
    assert len(items) == 3
    payload = ip.read_bytes()[16:]
    for i, (img, label) in enumerate(items):
        assert label == labels[i]
        assert np.array_equal(img, images[i])
        assert img[5, 7] == payload[i * 784 + 5 * 28 + 7]


def test_idx_bad_magic(tmp_path):
    ip, lp = write_idx(tmp_path, np.zeros((1, 2, 2)), [0], image_magic=0x1234)
    with pytest.raises(FormatError):
        load_idx(ip, lp)


def test_idx_truncated(tmp_path):
    ip, lp = write_idx(tmp_path, np.zeros((2, 4, 4)), [0, 1])
    ip.write_bytes(ip.read_bytes()[:-5])
    with pytest.raises(FormatError):
        load_idx(ip, lp)


def test_idx_label_out_of_range(tmp_path):
    ip, lp = write_idx(tmp_path, np.zeros((1, 2, 2)), [12])
    with pytest.raises(FormatError):
        load_idx(ip, lp)


def test_idx_count_mismatch(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    d1.mkdir(), d2.mkdir()
    ip, lp = write_idx(d1, np.zeros((2, 2, 2)), [1, 2])
    ip2, lp2 = write_idx(d2, np.zeros((1, 2, 2)), [1])
    with pytest.raises(FormatError):
        load_idx(ip2, lp)


# --- downscale ---------------------------------------------------------------

def test_downscale_constant_image():
    for factor in (1, 2, 4, 7, 14, 28):
        out = downscale(np.full((28, 28), 37.0), factor)
        assert out.shape == (28 // factor, 28 // factor)
        assert np.all(out == 37.0)


def test_downscale_to_single_pixel_is_global_mean():
    rng = np.random.default_rng(1)
    img = rng.integers(0, 256, (28, 28)).astype(float)
    assert downscale(img, 28)[0, 0] == pytest.approx(img.mean())


def test_downscale_checkerboard():
    img = np.indices((28, 28)).sum(axis=0) % 2 * 255
    assert np.all(downscale(img, 2) == 127.5)


def test_downscale_preserves_global_mean():
    rng = np.random.default_rng(2)
    img = rng.integers(0, 256, (28, 28)).astype(float)
    for factor in (2, 4, 7):
        assert downscale(img, factor).mean() == pytest.approx(img.mean())


def test_downscale_bad_factor():
    with pytest.raises(UsageError):
        downscale(np.zeros((28, 28)), 5)


# --- report log --------------------------------------------------------------

def record(i):
    return ReportRecord(instance_id=f"i{i}", method="dcs", delta=1,
                        verdict="Robust", wall_time=0.1 * i,
                        model_hash="m", input_hash="x",
                        perturbations_checked=5)


def test_append_and_read_report(tmp_path):
    path = tmp_path / "report.jsonl"
    append_report(record(1), path)
    append_report(record(2), path)
    got = read_report(path)
    assert [r.instance_id for r in got] == ["i1", "i2"]
    assert got[0] == record(1)


def test_empty_report(tmp_path):
    path = tmp_path / "report.jsonl"
    path.touch()
    assert read_report(path) == []
