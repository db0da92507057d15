"""Command implementations behind the CLI verbs.

Every command writes into an output directory and records what it wrote in
``manifest.json`` together with the fully resolved configuration, so a run
can be repeated from its manifest alone.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import formats
from .ablation import format_table, run_ablation, trend_notes, write_csv
from .classifier import FeatureSet, evaluate, train
from .config import PipelineConfig, dict_to_ini, synth_spec_to_dict
from .errors import DataError, ShapeMismatchError
from .pipeline import encode_sample, feature_set
from .plotting import plot_ablation, plot_tensor, plot_training
from .signal_core import SynthSpec, synth_dataset

log = logging.getLogger(__name__)

MANIFEST = "manifest.json"


def _out_dir(path) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_manifest(out_dir, kind, files, config=None, **extra) -> Path:
    out_dir = Path(out_dir)
    names = sorted({str(Path(f).relative_to(out_dir)) for f in files})
    manifest = {"kind": kind}
    if config is not None:
        manifest["config"] = config.to_dict()
        manifest["config_text"] = config.to_text()
    manifest.update(extra)
    manifest["files"] = {name: formats.sha256_file(out_dir / name) for name in names}
    path = out_dir / MANIFEST
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def read_manifest(directory) -> dict:
    path = Path(directory) / MANIFEST
    if not path.exists():
        raise DataError(f"no {MANIFEST} in {directory}")
    return json.loads(path.read_text())


def verify_manifest(directory) -> list[str]:
    """Names of listed files that are missing or whose hash changed."""
    directory = Path(directory)
    bad = []
    for name, digest in read_manifest(directory)["files"].items():
        f = directory / name
        if not f.exists() or formats.sha256_file(f) != digest:
            bad.append(name)
    return bad


def cmd_synth(spec: SynthSpec, out_dir) -> Path:
    """Generate a synthetic dataset as ``dataset.eegb`` + sidecar."""
    out = _out_dir(out_dir)
    dataset = synth_dataset(spec)
    spec_dict = synth_spec_to_dict(spec)
    files = formats.write_dataset(out / "dataset.eegb", dataset, extra={"synth": spec_dict["synth"]})
    spec_path = out / "synth.ini"
    spec_path.write_text(dict_to_ini(spec_dict))
    write_manifest(out, "synth", [*files, spec_path], num_samples=len(dataset),
                   num_classes=dataset.num_classes)
    log.info("wrote %d samples to %s", len(dataset), files[0])
    return files[0]


def cmd_encode(dataset_path, config: PipelineConfig, out_dir, figures: int = 1) -> Path:
    """Encode every sample; write raw tensor, three PGMs and a manifest."""
    dataset = formats.load_dataset(dataset_path, seed=config.seed)
    out = _out_dir(out_dir)
    files, records = [], []
    for i, sample in enumerate(dataset.samples):
        tensor = encode_sample(sample, config.icwmh, config.edge)
        stem = f"sample_{i:05d}"
        files += formats.write_raw(out / f"{stem}.f32", tensor)
        for layer, name in enumerate(("encoded", "edge", "enriched")):
            files.append(formats.write_pgm(out / f"{stem}_{name}.pgm", tensor[layer]))
        if i < figures:
            files.append(plot_tensor(tensor, out / f"{stem}_preview.png",
                                     title=f"sample {i} (label {sample.label})"))
        records.append({"index": i, "label": sample.label, "split": dataset.splits[i],
                        "tensor": f"{stem}.f32"})
    log.info("encoded %d samples into %s", len(records), out)
    return write_manifest(out, "encode", files, config, source=str(dataset_path),
                          source_sha256=_source_hash(dataset_path), num_classes=dataset.num_classes,
                          tensor_shape=[3, config.icwmh.height, config.icwmh.width], samples=records)


def _source_hash(path):
    path = Path(path)
    return formats.sha256_file(path) if path.is_file() else None


def load_encoded(directory) -> FeatureSet:
    """Rebuild a FeatureSet from an encode output directory."""
    directory = Path(directory)
    manifest = read_manifest(directory)
    if manifest.get("kind") != "encode":
        raise DataError(f"{directory} is not an encode output")
    records = manifest["samples"]
    tensors = [formats.read_raw(directory / r["tensor"]) for r in records]
    labels = [-1 if r["label"] is None else r["label"] for r in records]
    return FeatureSet(np.stack(tensors).reshape(len(tensors), -1), labels,
                      [r["split"] for r in records], manifest["num_classes"])


def load_features(input_path, config: PipelineConfig) -> FeatureSet:
    """Accept either an encode output directory or a raw dataset to encode now."""
    input_path = Path(input_path)
    if input_path.is_dir() and (input_path / MANIFEST).exists():
        return load_encoded(input_path)
    dataset = formats.load_dataset(input_path, seed=config.seed)
    tensors = np.stack([encode_sample(s, config.icwmh, config.edge) for s in dataset.samples])
    return feature_set(tensors, dataset)


@dataclass
class TrainOutcome:
    checkpoint: Path
    metrics: Path
    best_epoch: int
    best_val_acc: float


def cmd_train(input_path, config: PipelineConfig, out_dir) -> TrainOutcome:
    data = load_features(input_path, config)
    result = train(data, config.train)
    out = _out_dir(out_dir)
    ckpt = formats.write_checkpoint(out / "checkpoint.eegw", result.params)
    metrics = formats.write_metrics(out / "metrics.csv", result.history)
    fig = plot_training(result.history, out / "training.png")
    write_manifest(out, "train", [ckpt, metrics, fig], config, source=str(input_path),
                   best_epoch=result.best_epoch, best_val_acc=result.best_val_acc)
    log.info("best val accuracy %.4f at epoch %d", result.best_val_acc, result.best_epoch)
    return TrainOutcome(ckpt, metrics, result.best_epoch, result.best_val_acc)


@dataclass
class EvalOutcome:
    accuracy: float
    correct: int
    total: int
    split: str

    def report(self) -> str:
        return f"accuracy {self.accuracy:.6f} ({self.correct}/{self.total} samples, split {self.split})"


def cmd_eval(checkpoint, input_path, config: PipelineConfig, split: str = "test") -> EvalOutcome:
    params = formats.read_checkpoint(checkpoint)
    data = load_features(input_path, config)
    if data.dim != params.dim:
        raise ShapeMismatchError(
            f"checkpoint expects feature dimension d={params.dim}, data has d={data.dim}"
        )
    x, y = data.split(split)
    acc = evaluate(params, x, y)
    return EvalOutcome(acc, int(round(acc * len(y))), len(y), split)


def cmd_ablate(dataset_path, config: PipelineConfig, out_dir, seeds=(0, 1, 2)):
    """Run the grid and write CSV, aligned text and a bar chart."""
    dataset = formats.load_dataset(dataset_path, seed=config.seed)
    rows = run_ablation(dataset, config, seeds)
    out = _out_dir(out_dir)
    table = format_table(rows)
    text_path = out / "ablation.txt"
    text_path.write_text(table + "".join(f"note: {n}\n" for n in trend_notes(rows)), encoding="utf-8")
    csv_path = write_csv(rows, out / "ablation.csv")
    fig = plot_ablation(rows, out / "ablation.png")
    write_manifest(out, "ablate", [text_path, csv_path, fig], config, source=str(dataset_path),
                   seeds=[int(s) for s in seeds])
    return rows, table
