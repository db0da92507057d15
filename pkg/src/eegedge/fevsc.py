"""Skip-connection enrichment: add the edge map back onto the encoded image."""

import numpy as np

from .errors import ShapeMismatchError


def _pair(encoded, edge):
    encoded = np.asarray(encoded, dtype=np.float64)
    edge = np.asarray(edge, dtype=np.float64)
    if encoded.shape != edge.shape or encoded.ndim != 2:
        raise ShapeMismatchError(f"encoded {encoded.shape} and edge {edge.shape} must be equal 2-D shapes")
    return encoded, edge


def enrich(encoded, edge) -> np.ndarray:
    """Elementwise ``clip(encoded + edge, 0, 1)``."""
    encoded, edge = _pair(encoded, edge)
    return np.clip(encoded + edge, 0.0, 1.0)


def assemble(encoded, edge) -> np.ndarray:
    """Stack ``[encoded, edge, enrich(encoded, edge)]`` into a 3 x H x W tensor."""
    encoded, edge = _pair(encoded, edge)
    tensor = np.stack([encoded, edge, enrich(encoded, edge)])
    if not (np.all(np.isfinite(tensor)) and tensor.min() >= 0.0 and tensor.max() <= 1.0):
        raise ShapeMismatchError("enriched tensor values must lie in [0, 1]")
    return tensor
