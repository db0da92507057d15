"""On-disk formats.

* EEGB  - concatenated sample records: ``b"EEGB"``, u32 version, u32 C,
  u32 L, u32 label (0xFFFFFFFF = unlabeled), then C*L little-endian f32
  values in channel-major order.
* CSV   - one row per channel, optional ``# label: m`` header line.
* PGM   - 8-bit binary P5, pixel = round-half-up(v * 255).
* raw   - little-endian f32 array plus a JSON sidecar ``{"shape": [...]}``.
* EEGW  - classifier checkpoint: ``b"EEGW"``, u32 version, u32 d, u32 M,
  then d*M weights (row-major) and M biases as little-endian f64.
"""

from __future__ import annotations

import csv
import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from .classifier import ClassifierParams, EpochMetrics
from .errors import DataError, FormatError
from .signal_core import Dataset, EegSample, assign_splits

EEGB_MAGIC = b"EEGB"
EEGW_MAGIC = b"EEGW"
FORMAT_VERSION = 1
UNLABELED = 0xFFFFFFFF

_EEGB_HEADER = struct.Struct("<4sIIII")
_EEGW_HEADER = struct.Struct("<4sIII")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


# -- EEGB ---------------------------------------------------------------------

def encode_eegb_record(sample: EegSample) -> bytes:
    data = np.asarray(sample.data)
    c, length = data.shape
    label = UNLABELED if sample.label is None else int(sample.label)
    header = _EEGB_HEADER.pack(EEGB_MAGIC, FORMAT_VERSION, c, length, label)
    return header + np.ascontiguousarray(data, dtype="<f4").tobytes()


def write_eegb(path, samples) -> Path:
    path = Path(path)
    with open(path, "wb") as fh:
        for sample in samples:
            fh.write(encode_eegb_record(sample))
    return path


def read_eegb(path) -> list[EegSample]:
    path = Path(path)
    blob = path.read_bytes()
    samples = []
    offset = 0
    while offset < len(blob):
        if len(blob) - offset < _EEGB_HEADER.size:
            raise FormatError("truncated EEGB header", path, offset)
        magic, version, c, length, label = _EEGB_HEADER.unpack_from(blob, offset)
        if magic != EEGB_MAGIC:
            raise FormatError(f"bad EEGB magic {magic!r}", path, offset)
        if version != FORMAT_VERSION:
            raise FormatError(f"unsupported EEGB version {version}", path, offset)
        if c < 1 or length < 1:
            raise FormatError(f"empty EEGB record {c}x{length}", path, offset)
        start = offset + _EEGB_HEADER.size
        end = start + 4 * c * length
        if end > len(blob):
            raise FormatError("truncated EEGB payload", path, start)
        data = np.frombuffer(blob, dtype="<f4", count=c * length, offset=start).reshape(c, length)
        if not np.all(np.isfinite(data)):
            raise FormatError("non-finite value in EEGB payload", path, start)
        samples.append(EegSample(data.astype(np.float64), label=None if label == UNLABELED else label))
        offset = end
    return samples


# -- CSV ----------------------------------------------------------------------

def write_csv_sample(path, sample: EegSample) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        if sample.label is not None:
            fh.write(f"# label: {int(sample.label)}\n")
        writer = csv.writer(fh)
        for row in np.asarray(sample.data):
            writer.writerow(repr(float(v)) for v in row)
    return path


def read_csv_sample(path) -> EegSample:
    path = Path(path)
    label = None
    rows = []
    with open(path, newline="") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                if key.strip() == "label":
                    try:
                        label = int(value)
                    except ValueError:
                        raise FormatError(f"bad label line {line!r}", path, lineno) from None
                continue
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError:
                raise FormatError(f"non-numeric CSV field on line {lineno}", path) from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise FormatError("CSV sample needs equal-length, non-empty channel rows", path)
    return EegSample(np.array(rows), label=label)


# -- datasets -----------------------------------------------------------------

def dataset_sidecar(path) -> Path:
    return Path(path).with_suffix(".json")


def write_dataset(path, dataset: Dataset, extra=None) -> list[Path]:
    """Write ``<path>.eegb`` plus a JSON sidecar carrying class count and splits."""
    path = Path(path)
    write_eegb(path, dataset.samples)
    meta = {"num_classes": dataset.num_classes, "num_samples": len(dataset), "splits": dataset.splits}
    if extra:
        meta.update(extra)
    side = dataset_sidecar(path)
    side.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return [path, side]


def load_dataset(path, seed: int = 0) -> Dataset:
    """Load an EEGB file (with optional sidecar) or a directory of CSV samples.

    Without a sidecar the class count is ``max(label) + 1`` and splits are
    assigned 80/10/10 from ``seed``.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"dataset not found: {path}")
    meta = {}
    if path.is_dir():
        files = sorted(path.glob("*.csv"))
        if not files:
            raise DataError(f"no .csv samples in {path}")
        samples = [read_csv_sample(f) for f in files]
    else:
        samples = read_eegb(path)
        side = dataset_sidecar(path)
        if side.exists():
            meta = json.loads(side.read_text())
    if not samples:
        raise DataError(f"dataset {path} is empty")
    labels = [s.label for s in samples if s.label is not None]
    num_classes = meta.get("num_classes", (max(labels) + 1) if labels else 1)
    splits = meta.get("splits") or assign_splits(len(samples), seed=seed)
    return Dataset(samples, int(num_classes), list(splits))


# -- images -------------------------------------------------------------------

def to_8bit(image) -> np.ndarray:
    image = np.asarray(image, dtype=np.float64)
    return np.floor(np.clip(image, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def write_pgm(path, image) -> Path:
    path = Path(path)
    pixels = to_8bit(image)
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())
    return path


def read_pgm(path) -> np.ndarray:
    path = Path(path)
    blob = path.read_bytes()
    fields = []
    pos = 0
    while len(fields) < 4:
        while pos < len(blob) and blob[pos:pos + 1].isspace():
            pos += 1
        if blob[pos:pos + 1] == b"#":
            pos = blob.index(b"\n", pos) + 1
            continue
        start = pos
        while pos < len(blob) and not blob[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError("truncated PGM header", path, start)
        fields.append(blob[start:pos])
    if fields[0] != b"P5":
        raise FormatError(f"not a binary PGM: {fields[0]!r}", path, 0)
    w, h, maxval = (int(f) for f in fields[1:])
    if maxval != 255:
        raise FormatError(f"only maxval 255 supported, got {maxval}", path)
    pos += 1
    if len(blob) - pos < w * h:
        raise FormatError("truncated PGM raster", path, pos)
    return np.frombuffer(blob, dtype=np.uint8, count=w * h, offset=pos).reshape(h, w)


def raw_sidecar(path) -> Path:
    return Path(path).with_suffix(".json")


def write_raw(path, array) -> list[Path]:
    path = Path(path)
    array = np.ascontiguousarray(array, dtype="<f4")
    path.write_bytes(array.tobytes())
    side = raw_sidecar(path)
    side.write_text(json.dumps({"shape": list(array.shape)}) + "\n")
    return [path, side]


def read_raw(path) -> np.ndarray:
    path = Path(path)
    side = raw_sidecar(path)
    if not side.exists():
        raise FormatError("missing raw sidecar", side)
    shape = tuple(json.loads(side.read_text())["shape"])
    blob = path.read_bytes()
    if len(blob) != 4 * int(np.prod(shape)):
        raise FormatError(f"raw payload of {len(blob)} bytes does not match shape {shape}", path)
    return np.frombuffer(blob, dtype="<f4").reshape(shape).astype(np.float64)


# -- checkpoints and metrics --------------------------------------------------

def write_checkpoint(path, params) -> Path:
    path = Path(path)
    d, m = params.weights.shape
    with open(path, "wb") as fh:
        fh.write(_EEGW_HEADER.pack(EEGW_MAGIC, FORMAT_VERSION, d, m))
        fh.write(np.ascontiguousarray(params.weights, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(params.bias, dtype="<f8").tobytes())
    return path


def read_checkpoint(path):
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < _EEGW_HEADER.size:
        raise FormatError("truncated EEGW header", path, 0)
    magic, version, d, m = _EEGW_HEADER.unpack_from(blob, 0)
    if magic != EEGW_MAGIC:
        raise FormatError(f"bad EEGW magic {magic!r}", path, 0)
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported EEGW version {version}", path, 4)
    expected = _EEGW_HEADER.size + 8 * (d * m + m)
    if len(blob) != expected:
        raise FormatError(f"EEGW size {len(blob)} != expected {expected}", path, _EEGW_HEADER.size)
    values = np.frombuffer(blob, dtype="<f8", offset=_EEGW_HEADER.size).astype(np.float64)
    return ClassifierParams(values[:d * m].reshape(d, m), values[d * m:])


def write_metrics(path, history) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "train_loss", "val_acc"])
        for row in history:
            writer.writerow([row.epoch, repr(row.train_loss), repr(row.val_acc)])
    return path


def read_metrics(path):
    with open(path, newline="") as fh:
        return [EpochMetrics(int(r["epoch"]), float(r["train_loss"]), float(r["val_acc"]))
                for r in csv.DictReader(fh)]
