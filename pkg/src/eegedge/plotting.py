"""Report figures. Uses the Agg canvas directly so importing this module never
touches the global pyplot backend."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

_GROUP_COLORS = {
    "Interpolation Method": "#4c72b0",
    "Canny Edge Threshold": "#dd8452",
    "Gaussian Blur Kernel": "#55a868",
    "Adaptive Edge Threshold": "#c44e52",
}


def _save(fig, path, dpi=120):
    path = Path(path)
    FigureCanvasAgg(fig)
    # fixed metadata keeps reruns byte-identical
    fig.savefig(path, dpi=dpi, metadata={"Software": None})
    return path


def plot_ablation(rows, path, title="Ablation: test accuracy"):
    """Horizontal bar chart, one bar per grid cell, with seed std as error bars."""
    fig = Figure(figsize=(7, 0.45 * len(rows) + 1.2))
    ax = fig.add_subplot(1, 1, 1)
    y = np.arange(len(rows))[::-1]
    means = [100 * r.mean for r in rows]
    errs = [100 * r.std for r in rows]
    colors = [_GROUP_COLORS.get(r.method, "0.5") for r in rows]
    ax.barh(y, means, xerr=errs, color=colors, capsize=3)
    ax.set_yticks(y)
    ax.set_yticklabels([f"{r.method}: {r.label}" for r in rows], fontsize=8)
    ax.set_xlabel("Accuracy (%)")
    ax.set_xlim(0, 105)
    ax.set_title(title)
    ax.grid(axis="x", alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)


def plot_tensor(tensor, path, title=None):
    """Side-by-side view of the encoded, edge and enriched layers."""
    fig = Figure(figsize=(9, 3.2))
    names = ("encoded", "edge", "enriched")
    for i, name in enumerate(names):
        ax = fig.add_subplot(1, 3, i + 1)
        ax.imshow(tensor[i], cmap="gray", vmin=0.0, vmax=1.0, aspect="auto", interpolation="nearest")
        ax.set_title(name, fontsize=9)
        ax.set_xticks([])
        ax.set_yticks([])
    if title:
        fig.suptitle(title, fontsize=10)
    fig.tight_layout()
    return _save(fig, path)


def plot_training(history, path):
    """Train loss and validation accuracy per epoch."""
    fig = Figure(figsize=(6, 3.2))
    ax = fig.add_subplot(1, 1, 1)
    epochs = [h.epoch for h in history]
    ax.plot(epochs, [h.train_loss for h in history], color="#4c72b0", label="train loss")
    ax.set_xlabel("epoch")
    ax.set_ylabel("train loss")
    ax2 = ax.twinx()
    ax2.plot(epochs, [h.val_acc for h in history], color="#dd8452", label="val acc")
    ax2.set_ylabel("val accuracy")
    ax2.set_ylim(0, 1.02)
    fig.tight_layout()
    return _save(fig, path)
