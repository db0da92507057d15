"""Sample -> encoded image -> edge map -> 3-layer tensor -> feature vector."""

from __future__ import annotations

import numpy as np

from .classifier import FeatureSet
from .edge_detect import EdgeConfig, detect_edges
from .fevsc import assemble
from .icwmh import IcwmhConfig, icwmh
from .signal_core import Dataset, EegSample


def encode_sample(sample: EegSample, icwmh_config: IcwmhConfig = IcwmhConfig(),
                  edge_config: EdgeConfig = EdgeConfig()) -> np.ndarray:
    encoded = icwmh(sample, icwmh_config)
    return assemble(encoded, detect_edges(encoded, edge_config))


def encode_dataset(dataset: Dataset, icwmh_config: IcwmhConfig = IcwmhConfig(),
                   edge_config: EdgeConfig = EdgeConfig()) -> np.ndarray:
    """Stack of N x 3 x H x W tensors in dataset order."""
    return np.stack([encode_sample(s, icwmh_config, edge_config) for s in dataset.samples])


def feature_set(tensors, dataset: Dataset) -> FeatureSet:
    tensors = np.asarray(tensors)
    return FeatureSet(tensors.reshape(len(tensors), -1), dataset.labels(), list(dataset.splits),
                      dataset.num_classes)


def dataset_features(dataset: Dataset, icwmh_config: IcwmhConfig = IcwmhConfig(),
                     edge_config: EdgeConfig = EdgeConfig()) -> FeatureSet:
    return feature_set(encode_dataset(dataset, icwmh_config, edge_config), dataset)
