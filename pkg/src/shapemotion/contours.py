"""Outer border tracing, closed-curve polygon simplification, polygon geometry.

Points are ``(x, y)`` with x the column and y the row of a pixel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.spatial import ConvexHull, QhullError

_EIGHT = np.ones((3, 3), dtype=bool)

# Moore neighbourhood, clockwise on screen (y down), starting east: (dy, dx)
_RING = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)]
_RING_INDEX = {step: i for i, step in enumerate(_RING)}
_WEST = 4


@dataclass
class Contour:
    points: np.ndarray  # (n, 2) int, (x, y)

    def __len__(self):
        return len(self.points)


@dataclass
class Polygon:
    vertices: np.ndarray  # (n, 2) float, closed implicitly

    def __len__(self):
        return len(self.vertices)


@dataclass
class ContourMetrics:
    area: float
    perimeter: float
    convex: bool
    centroid: tuple[float, float]
    circularity: float
    axis_ratio: float
    degenerate: bool = False


def _trace_one(fg: np.ndarray, start: tuple[int, int]) -> list[tuple[int, int]]:
    """Moore-neighbour trace on a zero-padded boolean window; returns (y, x)."""
    sy, sx = start
    points = [(sy, sx)]
    cy, cx = sy, sx
    back = _WEST
    first_move = None
    # a border pixel is entered at most 4 times, so this bounds the loop
    for _ in range(4 * fg.size + 8):
        nxt = None
        for k in range(1, 9):
            d = (back + k) % 8
            dy, dx = _RING[d]
            if fg[cy + dy, cx + dx]:
                nxt = (cy + dy, cx + dx)
                py, px = _RING[(d - 1) % 8]
                prev = (cy + py, cx + px)
                break
        if nxt is None:
            return points  # isolated pixel
        if first_move is None:
            first_move = nxt
        elif (cy, cx) == (sy, sx) and nxt == first_move:
            points.pop()  # start pixel was appended again on arrival
            return points
        back = _RING_INDEX[(prev[0] - nxt[0], prev[1] - nxt[1])]
        cy, cx = nxt
        points.append(nxt)
    raise RuntimeError("contour tracing did not terminate")


def trace_contours(mask: np.ndarray, min_extent: int = 0) -> list[Contour]:
    """Outer border of every 8-connected white region, in raster order of
    each region's first pixel.

    ``min_extent`` skips regions whose bounding box area is below it, which
    is cheap and safe when only large enclosed areas are of interest.
    """
    fg_all = np.asarray(mask) != 0
    labels, n = ndimage.label(fg_all, structure=_EIGHT)
    contours = []
    for lab, slc in enumerate(ndimage.find_objects(labels), start=1):
        if slc is None:
            continue
        ys, xs = slc
        if (ys.stop - ys.start) * (xs.stop - xs.start) < min_extent:
            continue
        region = labels[slc] == lab
        window = np.pad(region, 1, mode="constant", constant_values=False)
        flat = int(np.argmax(region))
        start = (flat // region.shape[1] + 1, flat % region.shape[1] + 1)
        pts = _trace_one(window, start)
        arr = np.array([(x - 1 + xs.start, y - 1 + ys.start) for y, x in pts], dtype=np.int64)
        contours.append(Contour(arr))
    return contours


def _segment_distance(points, a, b):
    ab = b - a
    denom = float(ab @ ab)
    rel = points - a
    if denom == 0.0:
        return np.sqrt((rel * rel).sum(axis=1))
    t = (rel @ ab) / denom
    t[t < 0.0] = 0.0
    t[t > 1.0] = 1.0
    off = rel - t[:, None] * ab
    return np.sqrt((off * off).sum(axis=1))


def _rdp_keep(pts: np.ndarray, epsilon: float) -> np.ndarray:
    keep = np.zeros(len(pts), dtype=bool)
    keep[0] = keep[-1] = True
    stack = [(0, len(pts) - 1)]
    while stack:
        s, e = stack.pop()
        if e <= s + 1:
            continue
        d = _segment_distance(pts[s + 1:e], pts[s], pts[e])
        i = int(np.argmax(d))
        if d[i] >= epsilon and d[i] > 0:
            m = s + 1 + i
            keep[m] = True
            stack.append((m, e))
            stack.append((s, m))
    return keep


def _farthest_pair(pts: np.ndarray) -> tuple[int, int]:
    cand = np.arange(len(pts))
    if len(pts) > 64:
        try:
            cand = np.sort(ConvexHull(pts).vertices)
        except (QhullError, ValueError):
            pass
    sub = pts[cand]
    d2 = ((sub[:, None, :] - sub[None, :, :]) ** 2).sum(axis=-1)
    i, j = np.unravel_index(int(np.argmax(d2)), d2.shape)
    i, j = sorted((int(cand[i]), int(cand[j])))
    return i, j


def _dedupe(vertices: np.ndarray) -> np.ndarray:
    keep = np.any(vertices != np.roll(vertices, 1, axis=0), axis=1)
    if not keep.any():
        return vertices[:1]
    return vertices[keep]


def _prune_redundant(pts: np.ndarray, idx: list, epsilon: float) -> list:
    """Drop vertices whose whole neighbouring arc stays within epsilon of the
    chord that would replace them. The cut points chosen for the two-arc
    split are otherwise kept even when they lie mid-edge."""
    n = len(pts)
    changed = True
    while changed and len(idx) > 3:
        changed = False
        for k in range(len(idx)):
            a, b = idx[k - 1], idx[(k + 1) % len(idx)]
            span = (b - a) % n
            arc = pts[(a + 1 + np.arange(span - 1)) % n]
            if len(arc) == 0 or _segment_distance(arc, pts[a], pts[b]).max() < epsilon:
                del idx[k]
                changed = True
                break
    return idx


def approx_polygon(contour, epsilon: float) -> Polygon:
    """Ramer-Douglas-Peucker simplification of a closed contour.

    The curve is cut at its two farthest-apart points and each arc is
    simplified separately. Distances are measured to the segment, so every
    dropped point lies within ``epsilon`` of the result.
    """
    pts = np.asarray(getattr(contour, "points", contour), dtype=np.float64)
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if len(pts) < 4:
        raise ValueError("contour needs at least 4 points")
    if epsilon == 0:
        return Polygon(_dedupe(pts))
    i, j = _farthest_pair(pts)
    n = len(pts)
    arc1 = np.arange(i, j + 1)
    arc2 = np.concatenate([np.arange(j, n), np.arange(0, i + 1)])
    keep1 = arc1[_rdp_keep(pts[arc1], epsilon)]
    keep2 = arc2[_rdp_keep(pts[arc2], epsilon)]
    idx = [int(v) for v in np.concatenate([keep1[:-1], keep2[:-1]])]
    idx = _prune_redundant(pts, idx, epsilon)
    return Polygon(_dedupe(pts[idx]))


def contour_perimeter(points: np.ndarray) -> float:
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) < 2:
        return 0.0
    return float(np.hypot(*(np.roll(pts, -1, axis=0) - pts).T).sum())


def shoelace_area(points: np.ndarray) -> float:
    pts = np.asarray(points, dtype=np.float64)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))


def is_convex(vertices: np.ndarray, perimeter: float | None = None) -> bool:
    v = np.asarray(vertices, dtype=np.float64)
    if len(v) < 3:
        return False
    if perimeter is None:
        perimeter = contour_perimeter(v)
    e1 = np.roll(v, -1, axis=0) - v
    e2 = np.roll(e1, -1, axis=0)
    cross = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    # near-collinear turns are not sign violations
    tol = 1e-6 * perimeter * perimeter
    significant = cross[np.abs(cross) > tol]
    return bool(np.all(significant > 0) or np.all(significant < 0))


def hull_area(points: np.ndarray) -> float:
    """Area of the convex hull; an upper bound for any simple polygon whose
    vertices are taken from ``points``."""
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) < 3:
        return 0.0
    try:
        return float(ConvexHull(pts).volume)
    except (QhullError, ValueError):
        return 0.0  # collinear


def polygon_moments(vertices: np.ndarray):
    """Signed area, centroid and central second moments (mu20, mu02, mu11)
    of a simple polygon, per unit area."""
    v = np.asarray(vertices, dtype=np.float64)
    x0, y0 = v.mean(axis=0)  # shift for numerical stability
    x, y = v[:, 0] - x0, v[:, 1] - y0
    x1, y1 = np.roll(x, -1), np.roll(y, -1)
    c = x * y1 - x1 * y
    a = 0.5 * c.sum()
    if a == 0.0:
        return 0.0, (x0, y0), (0.0, 0.0, 0.0)
    cx = ((x + x1) * c).sum() / (6.0 * a)
    cy = ((y + y1) * c).sum() / (6.0 * a)
    m20 = ((x * x + x * x1 + x1 * x1) * c).sum() / (12.0 * a)
    m02 = ((y * y + y * y1 + y1 * y1) * c).sum() / (12.0 * a)
    m11 = ((x * y1 + 2 * x * y + 2 * x1 * y1 + x1 * y) * c).sum() / (24.0 * a)
    mu = (m20 - cx * cx, m02 - cy * cy, m11 - cx * cy)
    return a, (cx + x0, cy + y0), mu


def axis_ratio(mu20: float, mu02: float, mu11: float) -> float:
    """Minor/major axis length ratio of the inertia ellipse."""
    half_trace = 0.5 * (mu20 + mu02)
    root = math.sqrt(max(0.0, 0.25 * (mu20 - mu02) ** 2 + mu11 * mu11))
    major, minor = half_trace + root, half_trace - root
    if major <= 0:
        return 0.0
    return math.sqrt(max(0.0, minor) / major)


def contour_metrics(polygon) -> ContourMetrics:
    v = np.asarray(getattr(polygon, "vertices", polygon), dtype=np.float64)
    perimeter = contour_perimeter(v)
    signed, centroid, mu = polygon_moments(v)
    area = abs(signed)
    degenerate = len(v) < 3 or area <= 1e-12 * max(perimeter, 1.0) ** 2
    circularity = 4.0 * math.pi * area / perimeter ** 2 if perimeter > 0 else 0.0
    return ContourMetrics(
        area=float(area),
        perimeter=float(perimeter),
        convex=False if degenerate else is_convex(v, perimeter),
        centroid=(float(centroid[0]), float(centroid[1])),
        circularity=float(circularity),
        axis_ratio=0.0 if degenerate else axis_ratio(*mu),
        degenerate=bool(degenerate),
    )
