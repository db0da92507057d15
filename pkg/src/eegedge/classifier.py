"""Linear softmax head trained with Adam on flattened feature vectors.

Also hosts the per-channel gradient dispersion diagnostic, which measures
how unevenly the loss gradient is spread across channel blocks of the
weight matrix when the raw signal is fed in channel-major order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError, ShapeMismatchError, UnlabeledError

log = logging.getLogger(__name__)


@dataclass
class ClassifierParams:
    weights: np.ndarray  # d x M
    bias: np.ndarray  # M

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[1],):
            raise ShapeMismatchError(
                f"weights {self.weights.shape} and bias {self.bias.shape} are inconsistent"
            )
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise DataError("classifier parameters must be finite")

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    @property
    def num_classes(self) -> int:
        return self.weights.shape[1]

    @classmethod
    def zeros(cls, dim, num_classes):
        return cls(np.zeros((dim, num_classes)), np.zeros(num_classes))

    @classmethod
    def random(cls, dim, num_classes, scale=0.01, seed=0):
        rng = np.random.default_rng(seed)
        return cls(scale * rng.standard_normal((dim, num_classes)), scale * rng.standard_normal(num_classes))

    def copy(self):
        return ClassifierParams(self.weights.copy(), self.bias.copy())


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 9e-4
    batch_size: int = 64
    epochs: int = 100
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if not self.lr >= 0:
            raise ConfigError(f"lr must be >= 0, got {self.lr}")
        if int(self.batch_size) < 1 or int(self.epochs) < 1:
            raise ConfigError("batch_size and epochs must be >= 1")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1 and self.eps > 0):
            raise ConfigError("Adam betas must lie in [0, 1) and eps must be positive")


@dataclass
class FeatureSet:
    """Flattened features with labels and split tags, ready for training."""

    features: np.ndarray  # N x d
    labels: np.ndarray  # N, -1 for unlabeled
    splits: list
    num_classes: int

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2 or len(self.labels) != len(self.features) or len(self.splits) != len(self.labels):
            raise ShapeMismatchError("features, labels and splits must have matching lengths")

    @property
    def dim(self):
        return self.features.shape[1]

    def split(self, name):
        idx = np.array([i for i, tag in enumerate(self.splits) if tag == name], dtype=np.intp)
        x, y = self.features[idx], self.labels[idx]
        if np.any(y < 0):
            raise UnlabeledError(f"split {name!r} contains unlabeled samples")
        return x, y


@dataclass
class EpochMetrics:
    epoch: int
    train_loss: float
    val_acc: float


@dataclass
class TrainResult:
    params: ClassifierParams
    history: list = field(default_factory=list)
    best_epoch: int = 0
    best_val_acc: float = 0.0


def _check_dim(params, features):
    d = features.shape[-1]
    if d != params.dim:
        raise ShapeMismatchError(f"feature dimension {d} does not match classifier dimension {params.dim}")


def forward(params: ClassifierParams, features) -> np.ndarray:
    """Logits ``W^T x + b`` for one vector or a batch of row vectors."""
    features = np.asarray(features, dtype=np.float64)
    _check_dim(params, features)
    return features @ params.weights + params.bias


def softmax(logits) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _check_labels(labels, num_classes):
    labels = np.asarray(labels)
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise DataError(f"labels must lie in [0, {num_classes})")
    return labels


def ce_loss(logits, label: int) -> float:
    """Softmax cross-entropy of one logit vector against an integer label."""
    z = np.asarray(logits, dtype=np.float64)
    _check_labels([label], z.shape[-1])
    top = z.max()
    return float(top + np.log(np.sum(np.exp(z - top))) - z[label])


def batch_loss(params: ClassifierParams, features, labels) -> float:
    """Mean cross-entropy over a batch."""
    z = forward(params, np.atleast_2d(features))
    labels = _check_labels(labels, params.num_classes)
    top = z.max(axis=1, keepdims=True)
    lse = top[:, 0] + np.log(np.sum(np.exp(z - top), axis=1))
    return float(np.mean(lse - z[np.arange(len(labels)), labels]))


def grad(params: ClassifierParams, features, labels):
    """Gradient of the batch-mean cross-entropy: returns ``(dW, db)``."""
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    labels = _check_labels(np.atleast_1d(labels), params.num_classes)
    if len(features) == 0:
        raise DataError("gradient of an empty batch")
    if len(labels) != len(features):
        raise ShapeMismatchError("one label per feature row required")
    residual = softmax(forward(params, features))
    residual[np.arange(len(labels)), labels] -= 1.0
    n = len(labels)
    return features.T @ residual / n, residual.sum(axis=0) / n


def evaluate(params: ClassifierParams, features, labels) -> float:
    """Fraction of argmax hits; ties go to the lowest class index."""
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    labels = np.asarray(labels)
    if len(labels) == 0:
        raise DataError("cannot evaluate an empty split")
    predicted = np.argmax(forward(params, features), axis=1)
    return float(np.mean(predicted == labels))


def train(data: FeatureSet, config: TrainConfig = TrainConfig()) -> TrainResult:
    """Adam from zero initialization; returns the params from the epoch with
    the best validation accuracy (earliest on ties) and the full trace."""
    x_train, y_train = data.split("train")
    x_val, y_val = data.split("val")
    if len(y_train) == 0 or len(y_val) == 0:
        raise DataError("training needs non-empty train and val splits")
    params = ClassifierParams.zeros(data.dim, data.num_classes)
    m_w, v_w = np.zeros_like(params.weights), np.zeros_like(params.weights)
    m_b, v_b = np.zeros_like(params.bias), np.zeros_like(params.bias)
    b1, b2 = config.beta1, config.beta2
    rng = np.random.default_rng(config.seed)
    result = TrainResult(params.copy(), best_epoch=0, best_val_acc=-1.0)
    step = 0
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(len(y_train))
        for start in range(0, len(order), config.batch_size):
            batch = order[start:start + config.batch_size]
            g_w, g_b = grad(params, x_train[batch], y_train[batch])
            step += 1
            m_w = b1 * m_w + (1 - b1) * g_w
            v_w = b2 * v_w + (1 - b2) * g_w * g_w
            m_b = b1 * m_b + (1 - b1) * g_b
            v_b = b2 * v_b + (1 - b2) * g_b * g_b
            c1, c2 = 1 - b1 ** step, 1 - b2 ** step
            params.weights -= config.lr * (m_w / c1) / (np.sqrt(v_w / c2) + config.eps)
            params.bias -= config.lr * (m_b / c1) / (np.sqrt(v_b / c2) + config.eps)
        metrics = EpochMetrics(epoch, batch_loss(params, x_train, y_train), evaluate(params, x_val, y_val))
        result.history.append(metrics)
        log.debug("epoch %d loss %.5f val_acc %.4f", epoch, metrics.train_loss, metrics.val_acc)
        if metrics.val_acc > result.best_val_acc:
            result.params, result.best_epoch, result.best_val_acc = params.copy(), epoch, metrics.val_acc
    return result


def _unpack_sample(sample, label):
    data = getattr(sample, "data", sample)
    if label is None:
        label = getattr(sample, "label", None)
    if label is None:
        raise UnlabeledError("gradient diagnostics need a labeled sample")
    return np.asarray(data, dtype=np.float64), label


def channel_gradient_blocks(params: ClassifierParams, sample, label=None) -> np.ndarray:
    """Per-channel slices of the weight gradient for one channel-major sample.

    ``sample`` is an :class:`EegSample` or a bare C x L array (then ``label``
    is required). Returns shape (C, L, M); block ``c`` holds the gradient rows
    fed by channel ``c``.
    """
    data, label = _unpack_sample(sample, label)
    if data.ndim != 2:
        raise ShapeMismatchError(f"expected a C x L sample, got shape {data.shape}")
    c, length = data.shape
    if params.dim != c * length:
        raise ShapeMismatchError(
            f"classifier dimension {params.dim} does not partition into {c} channels of length {length}"
        )
    g_w, _ = grad(params, data.reshape(1, -1), [label])
    return g_w.reshape(c, length, params.num_classes)


def gradient_dispersion(params: ClassifierParams, sample, label=None) -> float:
    """Largest Frobenius distance between any two channel gradient blocks."""
    blocks = channel_gradient_blocks(params, sample, label)
    flat = blocks.reshape(len(blocks), -1)
    worst = 0.0
    for h in range(len(flat)):
        for k in range(h + 1, len(flat)):
            worst = max(worst, float(np.linalg.norm(flat[h] - flat[k])))
    return worst
