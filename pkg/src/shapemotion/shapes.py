"""Shape classification of traced contours and the detected-objects image."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contours import (ContourMetrics, Polygon, approx_polygon, contour_metrics,
                       contour_perimeter, hull_area, trace_contours)
from .filters import WHITE

SHAPE_LABELS = ("circle", "ellipse", "square", "rectangle")


@dataclass
class ShapeConfig:
    min_area: float = 100.0
    epsilon_fraction: float = 0.02  # RDP tolerance as a fraction of contour length
    right_angle_cos: float = 0.3
    square_side_ratio: float = 1.15
    circle_circularity: float = 0.85
    ellipse_circularity: float = 0.60
    circle_axis_ratio: float = 0.90


@dataclass
class ShapeDetection:
    label: str
    polygon: Polygon
    metrics: ContourMetrics
    bbox: tuple[int, int, int, int]  # half-open pixel extent [x0, y0, x1, y1)
    frame_index: int = 0
    outline: np.ndarray | None = None  # traced contour points, when known

    @property
    def silhouette(self) -> np.ndarray:
        return self.outline if self.outline is not None else self.polygon.vertices

    @property
    def centroid(self) -> tuple[float, float]:
        """Centroid in continuous image coordinates (pixel centres at +0.5)."""
        cx, cy = self.metrics.centroid
        return cx + 0.5, cy + 0.5

    def to_dict(self) -> dict:
        cx, cy = self.centroid
        return {"label": self.label, "centroid": [round(cx, 6), round(cy, 6)],
                "bbox": [int(v) for v in self.bbox], "area": round(self.metrics.area, 6),
                "vertices": len(self.polygon)}


def corner_cosines(vertices: np.ndarray) -> np.ndarray:
    v = np.asarray(vertices, dtype=np.float64)
    to_prev = np.roll(v, 1, axis=0) - v
    to_next = np.roll(v, -1, axis=0) - v
    dots = (to_prev * to_next).sum(axis=1)
    norms = np.hypot(*to_prev.T) * np.hypot(*to_next.T)
    return dots / norms


def classify_shape(polygon, metrics: ContourMetrics, cfg: ShapeConfig | None = None):
    """Return one of SHAPE_LABELS, or None when no rule matches."""
    cfg = cfg or ShapeConfig()
    if metrics.degenerate or not metrics.convex or metrics.area < cfg.min_area:
        return None
    v = np.asarray(getattr(polygon, "vertices", polygon), dtype=np.float64)
    n = len(v)
    if n == 4:
        if np.any(np.abs(corner_cosines(v)) > cfg.right_angle_cos):
            return None
        sides = np.hypot(*(np.roll(v, -1, axis=0) - v).T)
        if sides.max() / sides.min() <= cfg.square_side_ratio:
            return "square"
        return "rectangle"
    if n >= 8:
        if metrics.circularity >= cfg.circle_circularity and metrics.axis_ratio >= cfg.circle_axis_ratio:
            return "circle"
        if metrics.circularity >= cfg.ellipse_circularity and metrics.axis_ratio < cfg.circle_axis_ratio:
            return "ellipse"
    return None


def extract_objects(mask: np.ndarray, frame_index: int = 0, cfg: ShapeConfig | None = None):
    """Trace, simplify, measure and classify every region of ``mask``."""
    cfg = cfg or ShapeConfig()
    detections = []
    # a region whose box is smaller than min_area cannot enclose min_area
    for contour in trace_contours(mask, min_extent=int(math.floor(cfg.min_area))):
        if len(contour) < 4 or hull_area(contour.points) < cfg.min_area:
            continue
        eps = cfg.epsilon_fraction * contour_perimeter(contour.points)
        polygon = approx_polygon(contour, eps)
        if len(polygon) < 3:
            continue
        metrics = contour_metrics(polygon)
        label = classify_shape(polygon, metrics, cfg)
        if label is None:
            continue
        pts = contour.points
        bbox = (int(pts[:, 0].min()), int(pts[:, 1].min()),
                int(pts[:, 0].max()) + 1, int(pts[:, 1].max()) + 1)
        detections.append(ShapeDetection(label, polygon, metrics, bbox, frame_index, pts))
    return detections


def fill_polygon(vertices: np.ndarray, width: int, height: int) -> np.ndarray:
    """Even-odd scanline fill; a pixel is inside when its index point is,
    with top/left polygon edges inclusive and bottom/right exclusive."""
    out = np.zeros((height, width), dtype=bool)
    v = np.asarray(vertices, dtype=np.float64)
    if len(v) < 3:
        return out
    x0, y0 = v[:, 0], v[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    nonflat = y0 != y1
    x0, y0, x1, y1 = x0[nonflat], y0[nonflat], x1[nonflat], y1[nonflat]
    lo = max(0, int(math.ceil(v[:, 1].min())))
    hi = min(height, int(math.ceil(v[:, 1].max())))
    for y in range(lo, hi):
        crosses = ((y0 <= y) & (y < y1)) | ((y1 <= y) & (y < y0))
        if not crosses.any():
            continue
        xs = x0[crosses] + (y - y0[crosses]) * (x1[crosses] - x0[crosses]) / (y1[crosses] - y0[crosses])
        xs.sort()
        for a, b in zip(xs[0::2], xs[1::2]):
            start = max(0, int(math.ceil(a)))
            stop = min(width, int(math.ceil(b)))
            if stop > start:
                out[y, start:stop] ^= True
    return out


def render_objects_image(detections, width: int, height: int) -> np.ndarray:
    """Black canvas with each detection's silhouette filled white.

    The silhouette is the traced outline when available: the simplified
    polygon of a curved shape moves its vertices from frame to frame, which
    would show up as spurious SAD on a static object.
    """
    canvas = np.zeros((height, width), dtype=bool)
    for det in detections:
        canvas |= fill_polygon(det.silhouette, width, height)
    return np.where(canvas, WHITE, 0).astype(np.uint8)
