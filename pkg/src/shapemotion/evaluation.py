"""Detection scoring against ground truth: TP/FP/FN, recall, precision, F1."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass
class EvalCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __add__(self, other: "EvalCounts") -> "EvalCounts":
        return EvalCounts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)


@dataclass
class Metrics:
    recall: float
    precision: float
    f1: float


def box_iou(a, b) -> float:
    """IoU of two axis-aligned boxes given as [x0, y0, x1, y1]."""
    iw = min(a[2], b[2]) - max(a[0], b[0])
    ih = min(a[3], b[3]) - max(a[1], b[1])
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    union = (a[2] - a[0]) * (a[3] - a[1]) + (b[2] - b[0]) * (b[3] - b[1]) - inter
    return inter / union if union > 0 else 0.0


def _fields(obj):
    if isinstance(obj, dict):
        return obj["label"], obj["bbox"]
    return obj.label, obj.bbox


def match_detections(detections, truth, iou_threshold: float = 0.5) -> EvalCounts:
    """Greedy one-to-one pairing by descending box IoU.

    ``truth`` is a GroundTruthFrame or a plain list of truth objects. A pair
    is a true positive when IoU >= threshold and the labels agree; every
    detection and truth object left unpaired counts as FP and FN.
    """
    if not 0 < iou_threshold <= 1:
        raise ValueError("iou_threshold must be in (0, 1]")
    truth_objs = list(getattr(truth, "objects", truth))
    dets = [_fields(d) for d in detections]
    gts = [_fields(t) for t in truth_objs]
    candidates = []
    for i, (dl, db) in enumerate(dets):
        for j, (gl, gb) in enumerate(gts):
            if dl != gl:
                continue
            iou = box_iou(db, gb)
            if iou >= iou_threshold:
                candidates.append((-iou, i, j))
    candidates.sort()
    used_d, used_g = set(), set()
    for _, i, j in candidates:
        if i in used_d or j in used_g:
            continue
        used_d.add(i)
        used_g.add(j)
    tp = len(used_d)
    return EvalCounts(tp=tp, fp=len(dets) - tp, fn=len(gts) - tp)


def _ratio(num: int, den: int, vacuous: bool) -> float:
    if den == 0:
        return 1.0 if vacuous else 0.0
    return num / den


def compute_metrics(counts: EvalCounts) -> Metrics:
    """Recall tp/(tp+fn), precision tp/(tp+fp), F1 their harmonic mean.

    An empty scene with no detections scores 1.0 everywhere; an empty
    denominator on one side only scores 0.0.
    """
    vacuous = counts.tp == counts.fp == counts.fn == 0
    recall = _ratio(counts.tp, counts.tp + counts.fn, vacuous)
    precision = _ratio(counts.tp, counts.tp + counts.fp, vacuous)
    f1 = 0.0 if recall + precision == 0 else 2 * precision * recall / (precision + recall)
    return Metrics(recall, precision, f1)


def evaluate_sequence(predictions, truth, iou_threshold: float = 0.5) -> EvalCounts:
    """Sum per-frame counts over a sequence, pairing frames by index.

    ``predictions`` maps frame index to a detection list; frames missing from
    it count as having no detections.
    """
    total = EvalCounts()
    truth_by_index = {t.index: t for t in truth}
    for index in sorted(set(truth_by_index) | set(predictions)):
        gt = truth_by_index.get(index)
        total = total + match_detections(predictions.get(index, []),
                                         gt.objects if gt else [], iou_threshold)
    return total


def format_table(rows) -> str:
    """Plain-text table of (scene, EvalCounts) rows: Scene TP FP FN R P F1."""
    rows = list(rows)
    name_w = max([len("Scene")] + [len(name) for name, _ in rows])
    lines = [f"{'Scene':<{name_w}}  {'TP':>6}  {'FP':>6}  {'FN':>6}  {'R':>5}  {'P':>5}  {'F1':>5}"]
    for name, counts in rows:
        m = compute_metrics(counts)
        lines.append(f"{name:<{name_w}}  {counts.tp:>6}  {counts.fp:>6}  {counts.fn:>6}  "
                     f"{m.recall:>5.2f}  {m.precision:>5.2f}  {m.f1:>5.2f}")
    return "\n".join(lines)
