import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shapemotion.contours import (Contour, approx_polygon, contour_metrics, contour_perimeter,
                                  is_convex, shoelace_area, trace_contours)


def boundary_pixels(mask):
    """Oracle: white pixels with a black (or out-of-bounds) 8-neighbour."""
    h, w = mask.shape
    out = set()
    for y in range(h):
        for x in range(w):
            if not mask[y, x]:
                continue
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    yy, xx = y + dy, x + dx
                    if not (0 <= yy < h and 0 <= xx < w) or not mask[yy, xx]:
                        out.add((x, y))
    return out


def reference_rdp(points, eps):
    """Oracle: textbook recursive RDP on an open polyline, perpendicular-to-segment distance."""
    points = [tuple(map(float, p)) for p in points]

    def dist(p, a, b):
        ax, ay = a
        bx, by = b
        dx, dy = bx - ax, by - ay
        L = dx * dx + dy * dy
        if L == 0:
            return math.hypot(p[0] - ax, p[1] - ay)
        t = min(1.0, max(0.0, ((p[0] - ax) * dx + (p[1] - ay) * dy) / L))
        return math.hypot(p[0] - ax - t * dx, p[1] - ay - t * dy)

    def rec(pts):
        if len(pts) < 3:
            return pts
        ds = [dist(p, pts[0], pts[-1]) for p in pts[1:-1]]
        i = max(range(len(ds)), key=ds.__getitem__)
        if ds[i] >= eps and ds[i] > 0:
            left = rec(pts[:i + 2])
            return left[:-1] + rec(pts[i + 1:])
        return [pts[0], pts[-1]]

    return rec(points)


def is_clockwise(points):
    x, y = points[:, 0].astype(float), points[:, 1].astype(float)
    # positive shoelace sum in y-down coordinates means clockwise on screen
    return float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)) > 0


def test_empty_mask():
    assert trace_contours(np.zeros((7, 7), np.uint8)) == []


def test_single_block_3x3():
    mask = np.zeros((7, 7), np.uint8)
    mask[2:5, 2:5] = 255
    (c,) = trace_contours(mask)
    assert len(c) == 8
    assert {tuple(p) for p in c.points} == boundary_pixels(mask > 0)


def test_two_blocks():
    mask = np.zeros((10, 12), np.uint8)
    mask[1:4, 1:4] = 255
    mask[6:9, 7:11] = 255
    assert len(trace_contours(mask)) == 2


def test_region_touching_border_and_hole():
    mask = np.zeros((8, 8), np.uint8)
    mask[0:5, 0:5] = 255
    mask[2, 2] = 0  # a hole is not traced
    (c,) = trace_contours(mask)
    assert {tuple(p) for p in c.points} == {p for p in boundary_pixels(mask > 0)
                                            if p[0] in (0, 4) or p[1] in (0, 4)}


@pytest.mark.parametrize("seed", range(25))
def test_contour_invariants_random_blobs(seed):
    r = np.random.default_rng(seed)
    mask = r.random((14, 14)) < 0.55
    for c in trace_contours(mask):
        pts = c.points
        if len(pts) < 2:
            continue
        steps = np.abs(np.diff(np.vstack([pts, pts[:1]]), axis=0))
        assert steps.max() <= 1 and (steps.sum(axis=1) > 0).all()
        # the contour only visits outer boundary pixels of the region
        assert all(mask[y, x] for x, y in pts)


def test_traced_block_is_clockwise():
    mask = np.zeros((20, 20), bool)
    mask[3:15, 4:17] = True
    (c,) = trace_contours(mask)
    assert is_clockwise(c.points)


@pytest.mark.parametrize("shape", [(5, 5), (12, 7), (30, 30)])
def test_area_within_perimeter_band(shape):
    mask = np.zeros((40, 40), bool)
    mask[3:3 + shape[0], 4:4 + shape[1]] = True
    yy, xx = np.mgrid[:40, :40]
    disk = (xx - 25.5) ** 2 + (yy - 25.5) ** 2 <= 9 ** 2
    for m in (mask, disk):
        (c,) = trace_contours(m)
        p = contour_perimeter(c.points)
        assert abs(shoelace_area(c.points) - m.sum()) <= p


def square_contour(side=40, off=10):
    mask = np.zeros((side + 2 * off, side + 2 * off), bool)
    mask[off:off + side, off:off + side] = True
    (c,) = trace_contours(mask)
    return c


def test_rdp_square_corners():
    c = square_contour()
    poly = approx_polygon(c, 0.02 * contour_perimeter(c.points))
    assert len(poly) == 4
    corners = np.array([[10, 10], [49, 10], [49, 49], [10, 49]])
    for corner in corners:
        assert np.abs(poly.vertices - corner).max(axis=1).min() <= 1


def test_rdp_arcs_match_recursive_oracle():
    """Each arc of our split, before pruning, equals the textbook recursion."""
    from shapemotion.contours import _farthest_pair, _rdp_keep
    yy, xx = np.mgrid[:50, :50]
    mask = (xx - 24.5) ** 2 / 20 ** 2 + (yy - 24.5) ** 2 / 11 ** 2 <= 1
    (c,) = trace_contours(mask)
    pts = c.points.astype(float)
    i, j = _farthest_pair(pts)
    arc = pts[i:j + 1]
    for eps in (0.5, 1.0, 2.5):
        ours = [tuple(p) for p in arc[_rdp_keep(arc, eps)]]
        assert ours == reference_rdp(arc, eps)


def test_rdp_zero_epsilon_keeps_all():
    c = square_contour(12, 3)
    assert len(approx_polygon(c, 0.0)) == len(c)


def test_rdp_errors():
    with pytest.raises(ValueError):
        approx_polygon(Contour(np.array([[0, 0], [1, 0], [1, 1]])), 1.0)
    with pytest.raises(ValueError):
        approx_polygon(square_contour(), -1.0)


def test_rdp_monotone_and_within_epsilon():
    yy, xx = np.mgrid[:60, :60]
    (c,) = trace_contours((xx - 30) ** 2 + (yy - 30) ** 2 <= 22 ** 2)
    counts = []
    for eps in (0.0, 0.3, 0.7, 1.0, 1.5, 2.5, 4.0, 8.0):
        poly = approx_polygon(c, eps)
        counts.append(len(poly))
        v = poly.vertices
        edges = list(zip(v, np.roll(v, -1, axis=0)))
        from shapemotion.contours import _segment_distance
        d = np.min([_segment_distance(c.points.astype(float), a, b) for a, b in edges], axis=0)
        assert d.max() <= eps + 1e-9
    assert counts == sorted(counts, reverse=True)


def test_unit_square_metrics():
    m = contour_metrics(np.array([[0, 0], [1, 0], [1, 1], [0, 1]]))
    assert m.area == 1 and m.perimeter == 4 and m.convex
    assert m.centroid == (0.5, 0.5)
    assert m.circularity == pytest.approx(math.pi / 4)
    assert m.axis_ratio == pytest.approx(1.0)


def test_l_hexagon_not_convex():
    v = np.array([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]])
    assert not contour_metrics(v).convex
    assert not is_convex(v[::-1])


def test_regular_64gon():
    n, r = 64, 30.0
    a = 2 * math.pi * np.arange(n) / n
    v = np.column_stack([100 + r * np.cos(a), 50 + r * np.sin(a)])
    m = contour_metrics(v)
    assert m.circularity >= 0.99
    assert m.area == pytest.approx(0.5 * n * r * r * math.sin(2 * math.pi / n))
    assert m.perimeter == pytest.approx(2 * n * r * math.sin(math.pi / n))
    assert abs(m.centroid[0] - 100) <= 1e-6 and abs(m.centroid[1] - 50) <= 1e-6


def test_degenerate_flagged():
    m = contour_metrics(np.array([[0, 0], [5, 0], [10, 0]]))
    assert m.degenerate and m.area == 0 and not m.convex


def test_rectangle_axis_ratio():
    m = contour_metrics(np.array([[0, 0], [80, 0], [80, 40], [0, 40]]))
    assert m.axis_ratio == pytest.approx(0.5)


def test_polygon_centroid_close_to_pixel_centroid():
    yy, xx = np.mgrid[:80, :80]
    for mask in ((xx - 40.3) ** 2 / 25 ** 2 + (yy - 37.8) ** 2 / 12 ** 2 <= 1,
                 (abs(xx - 30) <= 10) & (abs(yy - 50) <= 6)):
        (c,) = trace_contours(mask)
        poly = approx_polygon(c, 0.02 * contour_perimeter(c.points))
        cx, cy = contour_metrics(poly).centroid
        assert abs(cx - xx[mask].mean()) <= 1 and abs(cy - yy[mask].mean()) <= 1


polygons = st.integers(3, 12).flatmap(lambda n: st.tuples(
    st.lists(st.floats(0.0, 2 * math.pi, allow_nan=False), min_size=n, max_size=n, unique=True),
    st.floats(1.0, 100.0), st.floats(0.3, 1.0)))


def _star(data):
    angles, r, squash = data
    a = np.sort(np.array(angles))
    return np.column_stack([r * np.cos(a), squash * r * np.sin(a)])


@settings(max_examples=80, deadline=None)
@given(polygons, st.floats(-500, 500), st.floats(-500, 500), st.floats(0.1, 50))
def test_metric_invariants(data, dx, dy, k):
    v = _star(data)
    m = contour_metrics(v)
    if m.degenerate or m.area < 1e-3:
        return
    shifted = contour_metrics(v + [dx, dy])
    assert shifted.centroid[0] == pytest.approx(m.centroid[0] + dx, abs=1e-6)
    assert shifted.centroid[1] == pytest.approx(m.centroid[1] + dy, abs=1e-6)
    assert contour_metrics(v * k).circularity == pytest.approx(m.circularity, rel=1e-9)
    assert is_convex(v) == is_convex(v[::-1])
    assert 0 < m.circularity <= 1 + 1e-9
