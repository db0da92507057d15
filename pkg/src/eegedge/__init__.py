"""Channel-homogenized EEG image encoding with edge-based feature enrichment."""

from .classifier import (
    ClassifierParams,
    FeatureSet,
    TrainConfig,
    ce_loss,
    evaluate,
    forward,
    grad,
    gradient_dispersion,
    train,
)
from .config import PipelineConfig, load_config
from .edge_detect import (
    EdgeConfig,
    GradientField,
    adaptive_threshold,
    detect_edges,
    gaussian_blur,
    gradient_field,
    hysteresis,
    non_max_suppress,
)
from .errors import ConfigError, DataError, FormatError, NonFiniteError, ShapeMismatchError, UnlabeledError
from .fevsc import assemble, enrich
from .icwmh import IcwmhConfig, icwmh, inverse_magnitude_scale, resize, squeeze_to_unit
from .pipeline import dataset_features, encode_dataset, encode_sample
from .signal_core import Dataset, EegSample, SynthSpec, channel_power, synth_dataset, validate_sample

__version__ = "0.1.0"
