"""Running-mean background model and adaptive foreground segmentation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .filters import WHITE


@dataclass
class BackgroundModel:
    """Per-pixel running mean of every frame absorbed so far.

    ``t`` counts absorbed frames. ``t_max`` optionally caps the learning
    rate at ``1 / t_max`` for long streams; ``None`` keeps the exact mean.
    """

    width: int
    height: int
    mean: np.ndarray = field(default=None, repr=False)
    t: int = 0
    t_max: int | None = None

    def __post_init__(self):
        if self.mean is None:
            self.mean = np.zeros((self.height, self.width), dtype=np.float64)
        else:
            self.mean = np.array(self.mean, dtype=np.float64)
        if self.mean.shape != (self.height, self.width):
            raise ValueError("mean shape does not match width/height")

    def copy(self) -> "BackgroundModel":
        return BackgroundModel(self.width, self.height, self.mean.copy(), self.t, self.t_max)


def _check_shape(pixels, model):
    if pixels.shape != (model.height, model.width):
        raise ValueError(
            f"frame is {pixels.shape[1]}x{pixels.shape[0]}, model is {model.width}x{model.height}")


def mma_update(model: BackgroundModel, pixels: np.ndarray) -> BackgroundModel:
    """Absorb one frame: ``mean += (I - mean) / t'`` with ``t' = t + 1``.

    Returns a new model; the input model is left untouched.
    """
    pixels = np.asarray(pixels)
    _check_shape(pixels, model)
    t_new = model.t + 1
    rate = t_new if model.t_max is None else min(t_new, model.t_max)
    mean = model.mean + (pixels.astype(np.float64) - model.mean) / rate
    return BackgroundModel(model.width, model.height, mean, t_new, model.t_max)


def abs_difference(pixels: np.ndarray, model: BackgroundModel) -> np.ndarray:
    pixels = np.asarray(pixels)
    _check_shape(pixels, model)
    return np.abs(pixels.astype(np.float64) - model.mean)


def adaptive_threshold(pixels: np.ndarray, model: BackgroundModel, lam: float = 1.0) -> float:
    """lam times the mean absolute frame/background difference."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    diff = abs_difference(pixels, model)
    return float(lam * diff.mean())


def foreground_mask(pixels: np.ndarray, model: BackgroundModel, threshold: float) -> np.ndarray:
    """White where ``|I - B| >= threshold``, black elsewhere."""
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    diff = abs_difference(pixels, model)
    return np.where(diff >= threshold, WHITE, 0).astype(np.uint8)


def effective_threshold(delta: float, floor: float = 2.0) -> float:
    # a static scene drives delta to ~0, where ">=" would mark every pixel
    return max(delta, floor)
