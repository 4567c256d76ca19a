"""
From a mask to labelled shapes
==============================

Trace the outer border of each region, simplify it to a polygon, measure
it, and apply the vertex and roundness rules.
"""
import numpy as np

from shapemotion import synth
from shapemotion.contours import approx_polygon, contour_metrics, contour_perimeter, trace_contours
from shapemotion.shapes import classify_shape, extract_objects

objs = [synth.ObjectSpec("square", 40, start=(50.0, 60.0)),
        synth.ObjectSpec("rectangle", [80, 40], start=(170.0, 50.0)),
        synth.ObjectSpec("circle", 30, start=(70.0, 170.0)),
        synth.ObjectSpec("ellipse", [50, 25], start=(220.0, 170.0))]
scene = synth.Scenario(background=0, objects=objs)
mask = synth.render_clean(scene, 0) > 0

for contour in trace_contours(mask):
    eps = 0.02 * contour_perimeter(contour.points)
    poly = approx_polygon(contour, eps)
    m = contour_metrics(poly)
    print("%4d border px -> %2d vertices  area %7.1f  circ %.3f  axes %.2f  -> %s"
          % (len(contour), len(poly), m.area, m.circularity, m.axis_ratio,
             classify_shape(poly, m)))

# the whole chain in one call, with the serialized form used by the CLI
for det in extract_objects(mask):
    print(det.to_dict())
