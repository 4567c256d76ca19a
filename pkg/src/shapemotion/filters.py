"""Gaussian smoothing and 3x3 binary morphology on uint8 rasters.

Masks are uint8 arrays whose values are exactly 0 or 255.
"""
from __future__ import annotations

import numpy as np

WHITE = 255

MORPH_OPS = ("dilate", "erode", "open", "close")


def gaussian_kernel(sigma: float, radius: int) -> np.ndarray:
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if radius < 1:
        raise ValueError("radius must be >= 1")
    k = np.arange(-radius, radius + 1, dtype=np.float64)
    w = np.exp(-(k * k) / (2.0 * sigma * sigma))
    return w / w.sum()


def _convolve_rows(img, weights, radius):
    padded = np.pad(img, ((0, 0), (radius, radius)), mode="edge")
    width = img.shape[1]
    out = np.zeros(img.shape, dtype=np.float64)
    for i, w in enumerate(weights):
        out += w * padded[:, i:i + width]
    return out


def blur_float(pixels: np.ndarray, sigma: float = 1.4, radius: int = 2) -> np.ndarray:
    """Separable Gaussian blur with replicated borders, unrounded."""
    weights = gaussian_kernel(sigma, radius)
    img = np.asarray(pixels, dtype=np.float64)
    tmp = _convolve_rows(img, weights, radius)
    return _convolve_rows(tmp.T, weights, radius).T


def gaussian_blur(pixels: np.ndarray, sigma: float = 1.4, radius: int = 2) -> np.ndarray:
    """Blur a gray raster and round back to uint8 (half rounds up)."""
    out = blur_float(pixels, sigma, radius)
    return np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)


def to_mask(values) -> np.ndarray:
    """Coerce a boolean or numeric array to a {0, 255} uint8 mask."""
    return np.where(np.asarray(values) != 0, WHITE, 0).astype(np.uint8)


def _neighborhood(mask: np.ndarray, combine):
    # out-of-bounds pixels are black
    fg = np.pad(np.asarray(mask) != 0, 1, mode="constant", constant_values=False)
    h, w = mask.shape
    acc = fg[1:h + 1, 1:w + 1].copy()
    for dy in (0, 1, 2):
        for dx in (0, 1, 2):
            if dy == 1 and dx == 1:
                continue
            combine(acc, fg[dy:dy + h, dx:dx + w], out=acc)
    return acc


def dilate(mask: np.ndarray) -> np.ndarray:
    return to_mask(_neighborhood(mask, np.logical_or))


def erode(mask: np.ndarray) -> np.ndarray:
    return to_mask(_neighborhood(mask, np.logical_and))


def morphology(mask: np.ndarray, op: str, iterations: int = 1) -> np.ndarray:
    """Apply ``op`` (dilate, erode, open, close) with a 3x3 box element.

    For open/close, ``iterations`` repeats each primitive that many times
    (e.g. open with 2 = erode, erode, dilate, dilate).
    """
    if op not in MORPH_OPS:
        raise ValueError(f"unknown morphology op {op!r}")
    out = to_mask(mask)
    if op == "dilate":
        steps = [dilate] * iterations
    elif op == "erode":
        steps = [erode] * iterations
    elif op == "open":
        steps = [erode] * iterations + [dilate] * iterations
    else:
        steps = [dilate] * iterations + [erode] * iterations
    for step in steps:
        out = step(out)
    return out


def apply_sequence(mask: np.ndarray, ops, iterations: int = 1) -> np.ndarray:
    for op in ops:
        mask = morphology(mask, op, iterations)
    return mask
