"""
Scoring detections
==================

Detections pair with truth objects by box overlap and label. Counts are
summed over frames before recall, precision and F1 are computed.
"""
from shapemotion.evaluation import EvalCounts, compute_metrics, format_table, match_detections
from shapemotion.synth import TruthObject

truth = [TruthObject("square", (25.0, 25.0), (10, 10, 40, 40), 900.0),
         TruthObject("circle", (75.0, 75.0), (60, 60, 90, 90), 706.9)]
dets = [{"label": "square", "bbox": [11, 10, 41, 40]},
        {"label": "square", "bbox": [60, 60, 90, 90]}]  # right place, wrong label
print(match_detections(dets, truth))

rows = [("One object in the scene", EvalCounts(124, 1, 26)),
        ("Moving objects", EvalCounts(271, 28, 16)),
        ("Empty scene", EvalCounts(0, 0, 0))]
print(format_table(rows))
print(compute_metrics(EvalCounts(0, 5, 0)))
