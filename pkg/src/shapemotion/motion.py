"""Frame-level motion decision by mean absolute difference, and per-object
speed from centroid displacement between associated detections."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class MotionReport:
    sad: float
    moving: bool
    frame_index: int = 0


@dataclass
class TrackedObject:
    label: str
    centroid: tuple[float, float]
    timestamp: float
    speed: float | None = None  # m/s, None until a previous position is known
    track_id: int = -1


def sad_distance(a, b) -> float:
    """Mean absolute difference over all pixels."""
    a = np.asarray(getattr(a, "pixels", a))
    b = np.asarray(getattr(b, "pixels", b))
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    diff = np.abs(a.astype(np.int64) - b.astype(np.int64))
    # integer sum is exact, so row-band splits reduce to the same value
    return float(diff.sum()) / diff.size


def motion_decision(sad: float, threshold: float) -> bool:
    """True only when ``sad`` is strictly above ``threshold``."""
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    return sad > threshold


def estimate_speed(prev: TrackedObject, cur: TrackedObject, meters_per_pixel: float) -> float:
    dt = cur.timestamp - prev.timestamp
    if dt <= 0:
        raise ValueError("timestamps must increase between positions")
    if meters_per_pixel <= 0:
        raise ValueError("meters_per_pixel must be positive")
    dist = math.hypot(cur.centroid[0] - prev.centroid[0], cur.centroid[1] - prev.centroid[1])
    return meters_per_pixel * dist / dt


def associate(prev, detections, timestamp: float, max_jump: float = 50.0,
              meters_per_pixel: float = 0.01, next_id: int = 0):
    """Greedy nearest-centroid matching of detections to previous tracks.

    Candidate pairs (same label, distance <= max_jump) are taken in order of
    distance, then previous-track index, then detection index. Returns the
    new track list (one per detection, in detection order) and the next
    free track id.
    """
    pairs = []
    for i, track in enumerate(prev):
        for j, det in enumerate(detections):
            if det.label != track.label:
                continue
            cx, cy = det.centroid
            d = math.hypot(cx - track.centroid[0], cy - track.centroid[1])
            if d <= max_jump:
                pairs.append((d, i, j))
    pairs.sort()
    used_prev, matched = set(), {}
    for d, i, j in pairs:
        if i in used_prev or j in matched:
            continue
        used_prev.add(i)
        matched[j] = i
    tracks = []
    for j, det in enumerate(detections):
        cur = TrackedObject(det.label, det.centroid, timestamp)
        if j in matched:
            old = prev[matched[j]]
            cur.track_id = old.track_id
            if timestamp > old.timestamp:
                cur.speed = estimate_speed(old, cur, meters_per_pixel)
        else:
            cur.track_id = next_id
            next_id += 1
        tracks.append(cur)
    return tracks, next_id
