"""Pixel normalization to mean 128 / standard deviation 128."""

from __future__ import annotations

import numpy as np

from ..dsp.audio import round_half_away


class ImageError(ValueError):
    pass


def normalize_image(pixels) -> np.ndarray:
    """Map uint8 pixels to y = (x - mean)/std * 128 + 128, rounded half away
    from zero and clamped to [0, 255]. A constant image maps to all-128
    (the zero-variance case is a pure offset)."""
    x = np.asarray(pixels, dtype=np.float64)
    if x.size == 0:
        raise ImageError("empty pixel array")
    if np.any(x < 0) or np.any(x > 255):
        raise ImageError("pixel values must be within [0, 255]")
    mean = float(np.mean(x))
    std = float(np.std(x))
    if std == 0.0:
        y = np.full_like(x, 128.0)
    else:
        y = (x - mean) / std * 128.0 + 128.0
    return np.clip(round_half_away(y), 0, 255).astype(np.uint8)
