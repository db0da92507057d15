"""Inverted channel-wise magnitude homogenization.

Each channel is divided by its RMS so every lead carries unit power, the
whole matrix is min-max squeezed into [0, 1], and the resulting C x L image
is resized to the network input size.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ShapeMismatchError
from .signal_core import EegSample, channel_powers, validate_sample

INTERPOLATIONS = ("bilinear", "nearest")


class ZeroPowerChannelWarning(UserWarning):
    pass


@dataclass(frozen=True)
class IcwmhConfig:
    height: int = 224
    width: int = 224
    interpolation: str = "bilinear"

    def __post_init__(self):
        if int(self.height) < 1 or int(self.width) < 1:
            raise ConfigError(f"target size must be positive, got {self.height}x{self.width}")
        if self.interpolation not in INTERPOLATIONS:
            raise ConfigError(f"interpolation must be one of {INTERPOLATIONS}, got {self.interpolation!r}")


def check_image(image) -> np.ndarray:
    """Return ``image`` as float64 after checking it is a finite 2-D array in [0, 1]."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2 or image.shape[0] < 1 or image.shape[1] < 1:
        raise ShapeMismatchError(f"image must be a non-empty 2-D array, got shape {image.shape}")
    if not np.all(np.isfinite(image)):
        raise ShapeMismatchError("image contains non-finite pixels")
    if image.min() < 0.0 or image.max() > 1.0:
        raise ShapeMismatchError(f"pixels outside [0, 1]: [{image.min()}, {image.max()}]")
    return image


def inverse_magnitude_scale(sample: EegSample) -> EegSample:
    """Scale every channel to unit mean-square amplitude.

    All-zero channels are passed through untouched and reported with a
    :class:`ZeroPowerChannelWarning`.
    """
    validate_sample(sample)
    power = channel_powers(sample.data)
    dead = power == 0.0
    if dead.any():
        idx = np.flatnonzero(dead).tolist()
        warnings.warn(f"zero-power channels left unscaled: {idx}", ZeroPowerChannelWarning, stacklevel=2)
    rms = np.sqrt(np.where(dead, 1.0, power))
    return sample.with_data(sample.data / rms[:, None])


def squeeze_to_unit(sample: EegSample) -> np.ndarray:
    """Global min-max map onto [0, 1]; a constant matrix maps to 0.5."""
    data = sample.data if isinstance(sample, EegSample) else np.asarray(sample, dtype=np.float64)
    lo, hi = data.min(), data.max()
    if hi == lo:
        return np.full(data.shape, 0.5)
    return (data - lo) / (hi - lo)


def _axis_weights(src: int, dst: int, mode: str):
    # align-corners: s = d * (S - 1) / (D - 1); a 1-pixel target samples coordinate 0
    d = np.arange(dst, dtype=np.float64)
    s = d * (src - 1) / (dst - 1) if dst > 1 else np.zeros(1)
    if mode == "nearest":
        idx = np.minimum(np.floor(s + 0.5).astype(np.intp), src - 1)
        return idx, idx, np.zeros(dst)
    i0 = np.minimum(np.floor(s).astype(np.intp), src - 1)
    i1 = np.minimum(i0 + 1, src - 1)
    return i0, i1, s - i0


def resize(image, config: IcwmhConfig) -> np.ndarray:
    image = check_image(image)
    h, w = image.shape
    r0, r1, fr = _axis_weights(h, config.height, config.interpolation)
    c0, c1, fc = _axis_weights(w, config.width, config.interpolation)
    rows = image[r0] * (1.0 - fr)[:, None] + image[r1] * fr[:, None]
    out = rows[:, c0] * (1.0 - fc)[None, :] + rows[:, c1] * fc[None, :]
    return np.clip(out, 0.0, 1.0)


def icwmh(sample: EegSample, config: IcwmhConfig = IcwmhConfig()) -> np.ndarray:
    """Encode one sample as an ``config.height x config.width`` image in [0, 1]."""
    return resize(squeeze_to_unit(inverse_magnitude_scale(sample)), config)
