"""One-axis-at-a-time ablation sweep over interpolation, Canny thresholds,
blur kernel and adaptive thresholding, reported as mean +/- std test
accuracy over training seeds."""

from __future__ import annotations

import csv
import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classifier import evaluate, train
from .config import PipelineConfig
from .edge_detect import EdgeConfig
from .icwmh import IcwmhConfig
from .pipeline import encode_dataset, feature_set
from .signal_core import Dataset

log = logging.getLogger(__name__)

CANNY_THRESHOLDS = ((40, 120), (50, 100), (50, 120), (50, 140))
BLUR_KERNELS = (3, 5, 7)


@dataclass(frozen=True)
class AblationCell:
    method: str
    label: str
    icwmh: IcwmhConfig
    edge: EdgeConfig


@dataclass
class AblationRow:
    method: str
    label: str
    accuracies: list

    @property
    def mean(self) -> float:
        return float(np.mean(self.accuracies))

    @property
    def std(self) -> float:
        if len(self.accuracies) < 2:
            return 0.0
        return float(np.std(self.accuracies, ddof=1))


def ablation_grid(baseline: PipelineConfig) -> list[AblationCell]:
    """The 11 cells, in table order, each differing from the baseline on one axis."""
    ic, ed = baseline.icwmh, baseline.edge
    cells = [
        AblationCell("Interpolation Method", f"'{mode}'", dataclasses.replace(ic, interpolation=mode), ed)
        for mode in ("bilinear", "nearest")
    ]
    cells += [
        AblationCell("Canny Edge Threshold", f"({lo},{hi})", ic,
                     dataclasses.replace(ed, mode="canny", canny_low=float(lo), canny_high=float(hi)))
        for lo, hi in CANNY_THRESHOLDS
    ]
    cells += [
        AblationCell("Gaussian Blur Kernel", f"({k},{k})", ic, dataclasses.replace(ed, blur_kernel=k))
        for k in BLUR_KERNELS
    ]
    cells += [
        AblationCell("Adaptive Edge Threshold", label, ic, dataclasses.replace(ed, mode=mode))
        for label, mode in (("Mean Threshold", "adaptive_mean"), ("Gaussian Threshold", "adaptive_gaussian"))
    ]
    return cells


def run_ablation(dataset: Dataset, baseline: PipelineConfig, seeds=(0, 1, 2)) -> list[AblationRow]:
    """Train once per (cell, seed); encodings are shared between cells with
    identical preprocessing."""
    cache = {}
    rows = []
    for cell in ablation_grid(baseline):
        key = (cell.icwmh, cell.edge)
        if key not in cache:
            cache[key] = feature_set(encode_dataset(dataset, cell.icwmh, cell.edge), dataset)
        data = cache[key]
        x_test, y_test = data.split("test")
        accs = []
        for seed in seeds:
            result = train(data, dataclasses.replace(baseline.train, seed=int(seed)))
            accs.append(evaluate(result.params, x_test, y_test))
        log.info("%s %s: %s", cell.method, cell.label, accs)
        rows.append(AblationRow(cell.method, cell.label, accs))
    return rows


def format_table(rows: list[AblationRow]) -> str:
    """Aligned text table with accuracies in percent."""
    header = ("Method", "Parameters", "Accuracy(%)")
    body = [(r.method, r.label, f"{100 * r.mean:.2f} ± {100 * r.std:.2f}") for r in rows]
    # blank repeated method names, as in a grouped table
    shown = []
    prev = None
    for method, label, acc in body:
        shown.append(("" if method == prev else method, label, acc))
        prev = method
    widths = [max(len(x[i]) for x in [header, *shown]) for i in range(3)]
    line = "  ".join("-" * w for w in widths)
    out = ["  ".join(h.ljust(w) for h, w in zip(header, widths)), line]
    out += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in shown]
    return "\n".join(out) + "\n"


def write_csv(rows: list[AblationRow], path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "parameters", "mean_acc", "std_acc", "n_seeds", "accuracies"])
        for r in rows:
            writer.writerow([r.method, r.label, f"{r.mean:.6f}", f"{r.std:.6f}", len(r.accuracies),
                             ";".join(f"{a:.6f}" for a in r.accuracies)])
    return path


def trend_notes(rows: list[AblationRow]) -> list[str]:
    """Soft observations (never asserted): does heavier blur hurt?"""
    by_label = {(r.method, r.label): r for r in rows}
    k3 = by_label.get(("Gaussian Blur Kernel", "(3,3)"))
    k7 = by_label.get(("Gaussian Blur Kernel", "(7,7)"))
    if k3 is None or k7 is None:
        return []
    verdict = "holds" if k3.mean >= k7.mean else "does not hold"
    return [f"kernel (3,3) >= (7,7): {verdict} ({100 * k3.mean:.2f} vs {100 * k7.mean:.2f})"]
