"""Canny edge detection: Sobel gradients, non-maximum suppression, hysteresis."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .filters import WHITE, gaussian_blur

_EIGHT = np.ones((3, 3), dtype=bool)

# (dy, dx) step along each of the 8 quantized gradient directions,
# counter-clockwise from +x in math orientation (y axis pointing down).
_STEPS = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)]


@dataclass
class GradientField:
    gx: np.ndarray
    gy: np.ndarray

    @property
    def magnitude(self) -> np.ndarray:
        return np.hypot(self.gx, self.gy)

    @property
    def direction(self) -> np.ndarray:
        """Angle in radians, in (-pi, pi]."""
        return np.arctan2(self.gy, self.gx)

    @property
    def width(self) -> int:
        return self.gx.shape[1]

    @property
    def height(self) -> int:
        return self.gx.shape[0]


def sobel_gradients(pixels: np.ndarray) -> GradientField:
    """3x3 Sobel responses with replicated borders."""
    img = np.asarray(pixels, dtype=np.float64)
    if img.ndim != 2 or img.shape[0] < 3 or img.shape[1] < 3:
        raise ValueError("sobel needs a 2-D frame of at least 3x3")
    p = np.pad(img, 1, mode="edge")
    h, w = img.shape
    # rows/cols of the 3x3 neighbourhood as shifted views
    tl, tc, tr = p[0:h, 0:w], p[0:h, 1:w + 1], p[0:h, 2:w + 2]
    ml, mr = p[1:h + 1, 0:w], p[1:h + 1, 2:w + 2]
    bl, bc, br = p[2:h + 2, 0:w], p[2:h + 2, 1:w + 1], p[2:h + 2, 2:w + 2]
    gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl)
    gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr)
    return GradientField(gx, gy)


def _shifted(arr, dy, dx):
    """arr sampled at (y + dy, x + dx); out-of-range reads as 0."""
    h, w = arr.shape
    out = np.zeros_like(arr)
    ys = slice(max(0, -dy), min(h, h - dy))
    xs = slice(max(0, -dx), min(w, w - dx))
    ys_src = slice(max(0, dy), min(h, h + dy))
    xs_src = slice(max(0, dx), min(w, w + dx))
    out[ys, xs] = arr[ys_src, xs_src]
    return out


def non_maximum_suppression(grad: GradientField) -> np.ndarray:
    """Thin the magnitude to ridge pixels along the quantized gradient line.

    A pixel survives if its magnitude is strictly greater than the neighbour
    it points towards and at least equal to the one behind it. The asymmetric
    tie rule keeps exactly one pixel of a two-pixel plateau: the one on the
    brighter side of the step.
    """
    mag = grad.magnitude
    octant = np.round(grad.direction / (np.pi / 4)).astype(np.int64) % 8
    keep = np.zeros(mag.shape, dtype=bool)
    for o, (dy, dx) in enumerate(_STEPS):
        sel = octant == o
        if not sel.any():
            continue
        ahead = _shifted(mag, dy, dx)
        behind = _shifted(mag, -dy, -dx)
        keep |= sel & (mag > ahead) & (mag >= behind)
    keep &= mag > 0
    return np.where(keep, mag, 0.0)


def hysteresis(thinned: np.ndarray, low: float, high: float) -> np.ndarray:
    """Keep weak pixels 8-connected (transitively) to a strong pixel."""
    weak = thinned >= low
    weak &= thinned > 0
    strong = weak & (thinned >= high)
    labels, n = ndimage.label(weak, structure=_EIGHT)
    if n == 0:
        return np.zeros(thinned.shape, dtype=bool)
    seeded = np.zeros(n + 1, dtype=bool)
    seeded[np.unique(labels[strong])] = True
    seeded[0] = False
    return seeded[labels]


def default_thresholds(magnitude: np.ndarray, high_ratio: float = 0.3,
                       low_ratio: float = 0.5) -> tuple[float, float]:
    """(low, high) with high a fraction of the peak magnitude."""
    high = high_ratio * float(magnitude.max()) if magnitude.size else 0.0
    return low_ratio * high, high


def canny(pixels: np.ndarray, low: float | None = None, high: float | None = None,
          sigma: float = 1.4, radius: int = 2, blur: bool = True) -> np.ndarray:
    """Edge mask (0/255) of a gray raster.

    With ``low``/``high`` left as None they follow the frame's peak gradient
    (see :func:`default_thresholds`).
    """
    if (low is None) != (high is None):
        raise ValueError("give both thresholds or neither")
    if low is not None and not 0 < low < high:
        raise ValueError("thresholds must satisfy 0 < low < high")
    img = gaussian_blur(pixels, sigma, radius) if blur else np.asarray(pixels)
    grad = sobel_gradients(img)
    thinned = non_maximum_suppression(grad)
    if low is None:
        low, high = default_thresholds(grad.magnitude)
        if high <= 0:
            return np.zeros(thinned.shape, dtype=np.uint8)
    edges = hysteresis(thinned, low, high)
    return np.where(edges, WHITE, 0).astype(np.uint8)
