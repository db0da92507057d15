"""Variant feature extraction on encoded images.

Canny mode: Gaussian blur -> Sobel gradient field -> non-maximum suppression
-> two-threshold hysteresis. Adaptive modes: Gaussian blur -> local mean or
Gaussian-weighted threshold. Thresholds are given on the 8-bit scale and
compared against ``pixel * 255``. Every border is replicate-padded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .errors import ConfigError, ShapeMismatchError
from .icwmh import check_image

EDGE_MODES = ("canny", "adaptive_mean", "adaptive_gaussian")

# quantized direction bin -> (da, db) offset of the forward neighbour
_NMS_OFFSETS = ((0, 1), (1, 1), (1, 0), (-1, 1))


@dataclass(frozen=True)
class EdgeConfig:
    mode: str = "canny"
    blur_kernel: int = 3
    canny_low: float = 50.0
    canny_high: float = 120.0
    adaptive_block: int = 11
    adaptive_c: float = 2.0

    def __post_init__(self):
        if self.mode not in EDGE_MODES:
            raise ConfigError(f"edge mode must be one of {EDGE_MODES}, got {self.mode!r}")
        _check_odd(self.blur_kernel, 1, "blur_kernel")
        _check_odd(self.adaptive_block, 3, "adaptive_block")
        _check_thresholds(self.canny_low, self.canny_high)


class GradientField(NamedTuple):
    magnitude: np.ndarray
    direction: np.ndarray


def _check_odd(k, minimum, name):
    if int(k) != k or k < minimum or k % 2 == 0:
        raise ConfigError(f"{name} must be an odd integer >= {minimum}, got {k}")


def _check_thresholds(low, high):
    if not 0 <= low < high <= 255:
        raise ConfigError(f"thresholds must satisfy 0 <= low < high <= 255, got ({low}, {high})")


def kernel_sigma(k: int) -> float:
    return 0.3 * ((k - 1) / 2 - 1) + 0.8


def gaussian_kernel(k: int, sigma: float | None = None) -> np.ndarray:
    """Normalized 1-D Gaussian taps of odd length ``k``."""
    _check_odd(k, 1, "kernel size")
    if sigma is None:
        sigma = kernel_sigma(k)
    x = np.arange(k, dtype=np.float64) - (k - 1) / 2
    w = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return w / w.sum()


def _correlate_1d(image, taps, axis):
    """Replicate-border correlation along one axis, written as a weighted sum
    of deviations from the centre so flat regions reproduce exactly."""
    r = len(taps) // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (r, r)
    padded = np.pad(image, pad, mode="edge")
    n = image.shape[axis]
    out = np.zeros_like(image)
    for j, w in enumerate(taps):
        if j == r:
            continue
        window = padded[j:j + n, :] if axis == 0 else padded[:, j:j + n]
        out += w * (window - image)
    return image + out


def _separable_smooth(image, taps):
    return _correlate_1d(_correlate_1d(image, taps, 0), taps, 1)


def gaussian_blur(image, k: int = 3) -> np.ndarray:
    image = check_image(image)
    if k == 1:
        return image.copy()
    return np.clip(_separable_smooth(image, gaussian_kernel(k)), 0.0, 1.0)


def gradient_field(image) -> GradientField:
    """3x3 Sobel gradients; direction is ``arctan(g_row / g_col)`` in (-pi/2, pi/2]."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2 or image.shape[0] < 3 or image.shape[1] < 3:
        raise ShapeMismatchError(f"gradient needs an image of at least 3x3, got {image.shape}")
    h, w = image.shape
    p = np.pad(image, 1, mode="edge")
    # rows a-1, a, a+1 and columns b-1, b, b+1 of the padded frame
    up, mid, down = p[0:h], p[1:h + 1], p[2:h + 2]
    smooth_cols = up + 2.0 * mid + down
    g_b = smooth_cols[:, 2:] - smooth_cols[:, :w]
    left, centre, right = p[:, 0:w], p[:, 1:w + 1], p[:, 2:w + 2]
    smooth_rows = left + 2.0 * centre + right
    g_a = smooth_rows[2:, :] - smooth_rows[:h, :]

    magnitude = np.sqrt(g_a * g_a + g_b * g_b)
    direction = np.zeros_like(magnitude)
    nz = g_b != 0
    direction[nz] = np.arctan(g_a[nz] / g_b[nz])
    direction[(~nz) & (g_a != 0)] = np.pi / 2
    return GradientField(magnitude, direction)


def quantize_direction(direction) -> np.ndarray:
    """Bin angles to 0 (0 deg), 1 (45), 2 (90), 3 (135)."""
    deg = np.mod(np.degrees(direction), 180.0)
    return (np.floor((deg + 22.5) / 45.0).astype(np.intp)) % 4


def non_max_suppress(field: GradientField) -> np.ndarray:
    """Keep a magnitude iff it is >= both neighbours along its quantized
    gradient direction (ties kept; off-image neighbours count as 0), then
    scale the survivors by 1/max."""
    mag = np.asarray(field.magnitude, dtype=np.float64)
    bins = quantize_direction(field.direction)
    h, w = mag.shape
    p = np.pad(mag, 1, mode="constant", constant_values=0.0)
    keep = np.zeros(mag.shape, dtype=bool)
    for b, (da, db) in enumerate(_NMS_OFFSETS):
        fwd = p[1 + da:1 + da + h, 1 + db:1 + db + w]
        bwd = p[1 - da:1 - da + h, 1 - db:1 - db + w]
        keep |= (bins == b) & (mag >= fwd) & (mag >= bwd)
    out = np.where(keep, mag, 0.0)
    peak = out.max() if out.size else 0.0
    if peak > 0:
        out = out / peak
    return out


_EIGHT = np.ones((3, 3), dtype=bool)


def hysteresis(nms, low: float = 50.0, high: float = 120.0) -> np.ndarray:
    """Binary edge map: strong pixels plus weak pixels 8-connected to one."""
    _check_thresholds(low, high)
    scaled = np.asarray(nms, dtype=np.float64) * 255.0
    strong = scaled >= high
    candidate = scaled >= low
    labels, n = ndimage.label(candidate, structure=_EIGHT)
    if n == 0:
        return np.zeros(scaled.shape)
    seeded = np.zeros(n + 1, dtype=bool)
    seeded[np.unique(labels[strong])] = True
    seeded[0] = False
    return seeded[labels].astype(np.float64)


def adaptive_threshold(image, method: str = "mean", block: int = 11, c: float = 2.0) -> np.ndarray:
    """Mark pixels that exceed their neighbourhood mean by more than ``c/255``.

    ``method="mean"`` uses a ``block x block`` box; ``"gaussian"`` uses
    Gaussian weights with the blur size-to-sigma rule.
    """
    _check_odd(block, 3, "block")
    image = check_image(image)
    if method == "mean":
        taps = np.full(block, 1.0 / block)
    elif method == "gaussian":
        taps = gaussian_kernel(block)
    else:
        raise ConfigError(f"adaptive method must be 'mean' or 'gaussian', got {method!r}")
    local = _separable_smooth(image, taps)
    return (image - local > c / 255.0).astype(np.float64)


def detect_edges(image, config: EdgeConfig = EdgeConfig()) -> np.ndarray:
    blurred = gaussian_blur(image, config.blur_kernel)
    if config.mode == "canny":
        nms = non_max_suppress(gradient_field(blurred))
        return hysteresis(nms, config.canny_low, config.canny_high)
    method = "mean" if config.mode == "adaptive_mean" else "gaussian"
    return adaptive_threshold(blurred, method, config.adaptive_block, config.adaptive_c)
