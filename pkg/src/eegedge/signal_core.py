"""EEG sample/dataset containers and the deterministic synthetic generator."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, NonFiniteError, ShapeMismatchError

SPLITS = ("train", "val", "test")
DEFAULT_FRACTIONS = (0.8, 0.1, 0.1)


@dataclass(eq=False)
class EegSample:
    """A C x L block of channel amplitudes with an optional class label.

    ``channels``/``length`` default to the data shape; pass them explicitly to
    have :func:`validate_sample` check a declared geometry.
    """

    data: np.ndarray
    label: Optional[int] = None
    channels: Optional[int] = None
    length: Optional[int] = None

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.channels is None and self.data.ndim == 2:
            self.channels = self.data.shape[0]
        if self.length is None and self.data.ndim == 2:
            self.length = self.data.shape[1]

    def with_data(self, data):
        return EegSample(data, label=self.label)


def validate_sample(sample: EegSample, num_classes: Optional[int] = None) -> EegSample:
    data = sample.data
    if data.ndim != 2:
        raise ShapeMismatchError(f"sample data must be 2-D, got shape {data.shape}")
    if sample.channels is None or sample.channels < 1 or sample.length is None or sample.length < 1:
        raise ShapeMismatchError("channels and length must be positive")
    if data.shape != (sample.channels, sample.length):
        raise ShapeMismatchError(
            f"declared {sample.channels}x{sample.length}, data is {data.shape[0]}x{data.shape[1]}"
        )
    bad = ~np.isfinite(data)
    if bad.any():
        c, i = np.argwhere(bad)[0]
        raise NonFiniteError(f"non-finite value {data[c, i]!r} at channel {c}, index {i}")
    if sample.label is not None:
        if sample.label < 0 or (num_classes is not None and sample.label >= num_classes):
            raise ShapeMismatchError(f"label {sample.label} outside [0, {num_classes})")
    return sample


def channel_power(sample: EegSample, c: int) -> float:
    """Mean-square amplitude of channel ``c``."""
    if not 0 <= c < sample.data.shape[0]:
        raise IndexError(f"channel {c} out of range for {sample.data.shape[0]} channels")
    row = sample.data[c]
    return float(np.mean(row * row))


def channel_powers(data: np.ndarray) -> np.ndarray:
    data = np.asarray(data, dtype=np.float64)
    return np.mean(data * data, axis=1)


def assign_splits(n: int, fractions: Sequence[float] = DEFAULT_FRACTIONS, seed: int = 0) -> list[str]:
    """Tag ``n`` items train/val/test in shuffled order.

    Train and val counts are ``round(n * f)``; test takes the remainder, so
    every count is within one item of its nominal share.
    """
    fractions = tuple(float(f) for f in fractions)
    if len(fractions) != 3 or min(fractions) < 0 or abs(sum(fractions) - 1.0) > 1e-9:
        raise ConfigError(f"split fractions must be three non-negative values summing to 1, got {fractions}")
    n_train = int(round(n * fractions[0]))
    n_val = min(int(round(n * fractions[1])), n - n_train)
    order = np.random.default_rng(seed).permutation(n)
    tags = [""] * n
    for rank, idx in enumerate(order):
        if rank < n_train:
            tags[idx] = "train"
        elif rank < n_train + n_val:
            tags[idx] = "val"
        else:
            tags[idx] = "test"
    return tags


@dataclass(eq=False)
class Dataset:
    samples: list[EegSample]
    num_classes: int
    splits: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.splits:
            self.splits = ["train"] * len(self.samples)
        if len(self.splits) != len(self.samples):
            raise ShapeMismatchError("one split tag per sample required")
        for tag in self.splits:
            if tag not in SPLITS:
                raise ShapeMismatchError(f"unknown split tag {tag!r}")
        shapes = {s.data.shape for s in self.samples}
        if len(shapes) > 1:
            raise ShapeMismatchError(f"samples have differing shapes: {sorted(shapes)}")
        for s in self.samples:
            validate_sample(s, self.num_classes)

    def __len__(self):
        return len(self.samples)

    @property
    def shape(self):
        return self.samples[0].data.shape if self.samples else None

    def indices(self, split: str) -> list[int]:
        return [i for i, tag in enumerate(self.splits) if tag == split]

    def subset(self, split: str) -> list[EegSample]:
        return [self.samples[i] for i in self.indices(split)]

    def labels(self) -> np.ndarray:
        return np.array([-1 if s.label is None else s.label for s in self.samples], dtype=np.int64)

    def label_distribution(self) -> np.ndarray:
        """Empirical class frequencies over labeled samples."""
        labels = self.labels()
        labels = labels[labels >= 0]
        counts = np.bincount(labels, minlength=self.num_classes).astype(np.float64)
        return counts / max(len(labels), 1)


@dataclass
class SynthSpec:
    """Recipe for a labeled synthetic dataset.

    Frequencies are in cycles per sample. ``None`` picks whole-period
    frequencies ``(2 + 3m) / length`` for class ``m``; ``gains=None`` means
    unit gain on every channel.
    """

    num_classes: int = 3
    channels: int = 8
    length: int = 128
    frequencies: Optional[tuple] = None
    noise_std: float = 0.1
    gains: Optional[tuple] = None
    samples_per_class: int = 100
    seed: int = 0
    fractions: tuple = DEFAULT_FRACTIONS

    def resolved_frequencies(self) -> np.ndarray:
        if self.frequencies is None:
            return (2.0 + 3.0 * np.arange(self.num_classes)) / self.length
        return np.asarray(self.frequencies, dtype=np.float64)

    def resolved_gains(self) -> np.ndarray:
        if self.gains is None:
            return np.ones(self.channels)
        return np.asarray(self.gains, dtype=np.float64)

    def validate(self) -> "SynthSpec":
        for name in ("num_classes", "channels", "length", "samples_per_class"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        freqs = self.resolved_frequencies()
        gains = self.resolved_gains()
        if freqs.shape != (self.num_classes,):
            raise ConfigError(f"need {self.num_classes} frequencies, got {freqs.size}")
        if len(np.unique(freqs)) != freqs.size:
            raise ConfigError("class frequencies must be distinct")
        if gains.shape != (self.channels,):
            raise ConfigError(f"need {self.channels} gains, got {gains.size}")
        if not np.all(gains > 0):
            raise ConfigError("channel gains must be positive")
        if not self.noise_std >= 0:
            raise ConfigError("noise_std must be >= 0")
        return self


def synth_dataset(spec: SynthSpec) -> Dataset:
    """Class ``m`` sample: ``gain_c * sin(2 pi f_m t)`` on every channel plus
    i.i.d. Gaussian noise. Classes are interleaved so any prefix is balanced."""
    spec.validate()
    freqs = spec.resolved_frequencies()
    gains = spec.resolved_gains()
    noise_seq, split_seq = np.random.SeedSequence(spec.seed).spawn(2)
    rng = np.random.default_rng(noise_seq)
    t = np.arange(spec.length, dtype=np.float64)
    waves = np.sin(2.0 * np.pi * freqs[:, None] * t[None, :])

    samples = []
    for _ in range(spec.samples_per_class):
        for m in range(spec.num_classes):
            noise = rng.standard_normal((spec.channels, spec.length))
            data = gains[:, None] * waves[m][None, :] + spec.noise_std * noise
            samples.append(EegSample(data, label=m))
    split_seed = int(split_seq.generate_state(1)[0])
    splits = assign_splits(len(samples), spec.fractions, seed=split_seed)
    return Dataset(samples, spec.num_classes, splits)
