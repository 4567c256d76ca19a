"""Deterministic synthetic scenes of moving geometric shapes with exact truth.

Pixel ``(x, y)`` covers the unit square ``[x, x+1) x [y, y+1)``; shapes are
rasterized by testing pixel centres ``(x + 0.5, y + 0.5)``. Truth centroids,
boxes and areas are given in the same continuous coordinates and come from
the trajectory and the shape equations, never from the raster.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .imgio import GrayFrame

LABELS = ("circle", "ellipse", "square", "rectangle")


@dataclass
class ObjectSpec:
    """One moving shape.

    ``size`` is the side for squares, ``[w, h]`` for rectangles, the radius
    for circles and ``[a, b]`` semi-axes for ellipses. ``trajectory`` is
    ``"linear"`` (``start`` moved by ``velocity`` px/frame) or ``"circular"``
    (orbit of ``orbit_radius`` around ``start``, moving ``speed`` px of arc
    per frame from ``phase`` radians).
    """

    label: str
    size: float | list = 20
    fill: int = 255
    start: tuple = (0.0, 0.0)
    trajectory: str = "linear"
    velocity: tuple = (0.0, 0.0)
    orbit_radius: float = 0.0
    speed: float = 0.0
    phase: float = 0.0
    angle: float = 0.0  # rotation, degrees
    appear: int = 0
    vanish: int | None = None

    def half_extents(self) -> tuple[float, float]:
        """Unrotated half width/height (rect) or semi-axes (ellipse)."""
        if self.label == "square":
            return self.size / 2, self.size / 2
        if self.label == "circle":
            return float(self.size), float(self.size)
        w, h = self.size
        if self.label == "rectangle":
            return w / 2, h / 2
        return float(w), float(h)

    def area(self) -> float:
        a, b = self.half_extents()
        if self.label in ("square", "rectangle"):
            return 4 * a * b
        return math.pi * a * b

    def center(self, t: float) -> tuple[float, float]:
        x0, y0 = self.start
        if self.trajectory == "linear":
            return x0 + self.velocity[0] * t, y0 + self.velocity[1] * t
        if self.trajectory == "circular":
            theta = self.phase + (self.speed / self.orbit_radius) * t
            return (x0 + self.orbit_radius * math.cos(theta),
                    y0 + self.orbit_radius * math.sin(theta))
        raise ValueError(f"unknown trajectory {self.trajectory!r}")

    def bbox_half(self) -> tuple[float, float]:
        a, b = self.half_extents()
        th = math.radians(self.angle)
        c, s = abs(math.cos(th)), abs(math.sin(th))
        if self.label in ("square", "rectangle"):
            return a * c + b * s, a * s + b * c
        return math.sqrt((a * c) ** 2 + (b * s) ** 2), math.sqrt((a * s) ** 2 + (b * c) ** 2)

    def visible(self, index: int) -> bool:
        return index >= self.appear and (self.vanish is None or index < self.vanish)


@dataclass
class Scenario:
    width: int = 320
    height: int = 240
    background: int = 40
    regions: list = field(default_factory=list)  # [{"rect": [x0,y0,x1,y1], "intensity": v}]
    objects: list = field(default_factory=list)
    noise: float = 0.0
    seed: int = 0
    motion_blur: bool = False
    fps: float = 10.0
    meters_per_pixel: float = 0.01

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        d = dict(d)
        d["objects"] = [o if isinstance(o, ObjectSpec) else ObjectSpec(**o)
                        for o in d.get("objects", [])]
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TruthObject:
    label: str
    centroid: tuple[float, float]
    bbox: tuple[float, float, float, float]
    area: float

    def to_dict(self) -> dict:
        return {"label": self.label, "centroid": list(self.centroid),
                "bbox": list(self.bbox), "area": self.area}


@dataclass
class GroundTruthFrame:
    index: int
    objects: list

    def to_dict(self) -> dict:
        return {"index": self.index, "objects": [o.to_dict() for o in self.objects]}


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        return Scenario.from_dict(json.load(fh))


def validate(scenario: Scenario, frame_count: int) -> None:
    if frame_count < 1:
        raise ValueError("frame count must be >= 1")
    if scenario.width < 1 or scenario.height < 1:
        raise ValueError("canvas must be at least 1x1")
    if scenario.noise < 0:
        raise ValueError("noise amplitude must be >= 0")
    for obj in scenario.objects:
        if obj.label not in LABELS:
            raise ValueError(f"unknown shape label {obj.label!r}")
        if obj.trajectory == "circular" and obj.orbit_radius <= 0:
            raise ValueError("circular trajectory needs orbit_radius > 0")
        if obj.speed < 0:
            raise ValueError("displacement per frame must be >= 0")
        a, b = obj.half_extents()
        full = (2 * a, 2 * b)
        if min(full) <= 2:
            raise ValueError(f"degenerate {obj.label} size {obj.size!r}")
        hx, hy = obj.bbox_half()
        times = [i for i in range(frame_count) if obj.visible(i)]
        if scenario.motion_blur:
            times += [i - 1 for i in times]
        for t in times:
            cx, cy = obj.center(t)
            if cx - hx < 0 or cy - hy < 0 or cx + hx > scenario.width or cy + hy > scenario.height:
                raise ValueError(f"{obj.label} leaves the canvas at frame {t}")


def shape_mask(obj: ObjectSpec, t: float, width: int, height: int) -> np.ndarray:
    """Boolean raster of one object at trajectory time ``t``."""
    cx, cy = obj.center(t)
    hx, hy = obj.bbox_half()
    x0, x1 = max(0, int(math.floor(cx - hx)) - 1), min(width, int(math.ceil(cx + hx)) + 1)
    y0, y1 = max(0, int(math.floor(cy - hy)) - 1), min(height, int(math.ceil(cy + hy)) + 1)
    out = np.zeros((height, width), dtype=bool)
    if x0 >= x1 or y0 >= y1:
        return out
    ys, xs = np.mgrid[y0:y1, x0:x1]
    dx = xs + 0.5 - cx
    dy = ys + 0.5 - cy
    th = math.radians(obj.angle)
    u = math.cos(th) * dx + math.sin(th) * dy
    v = -math.sin(th) * dx + math.cos(th) * dy
    a, b = obj.half_extents()
    if obj.label in ("square", "rectangle"):
        inside = (u >= -a) & (u < a) & (v >= -b) & (v < b)
    else:
        inside = (u / a) ** 2 + (v / b) ** 2 <= 1.0
    out[y0:y1, x0:x1] = inside
    return out


def _background(scenario: Scenario) -> np.ndarray:
    bg = np.full((scenario.height, scenario.width), float(scenario.background))
    for region in scenario.regions:
        x0, y0, x1, y1 = (int(v) for v in region["rect"])
        bg[y0:y1, x0:x1] = region["intensity"]
    return bg


def render_clean(scenario: Scenario, index: int) -> np.ndarray:
    """Noise-free float raster of frame ``index`` (before blur averaging)."""
    img = _background(scenario)
    for obj in scenario.objects:
        if obj.visible(index):
            img[shape_mask(obj, index, scenario.width, scenario.height)] = obj.fill
    return img


def truth_for(scenario: Scenario, index: int) -> GroundTruthFrame:
    objects = []
    for obj in scenario.objects:
        if not obj.visible(index):
            continue
        cx, cy = obj.center(index)
        hx, hy = obj.bbox_half()
        objects.append(TruthObject(obj.label, (cx, cy), (cx - hx, cy - hy, cx + hx, cy + hy),
                                   obj.area()))
    return GroundTruthFrame(index, objects)


def render_frame(scenario: Scenario, index: int) -> GrayFrame:
    img = render_clean(scenario, index)
    if scenario.motion_blur:
        prev = _background(scenario)
        for obj in scenario.objects:
            if obj.visible(index):
                prev[shape_mask(obj, index - 1, scenario.width, scenario.height)] = obj.fill
        img = 0.5 * (img + prev)
    if scenario.noise > 0:
        # one stream per frame so frames can be rendered independently
        rng = np.random.default_rng([scenario.seed, index])
        img = img + rng.uniform(-scenario.noise, scenario.noise, size=img.shape)
    pixels = np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)
    return GrayFrame(pixels, index, index / scenario.fps)


def generate_sequence(scenario: Scenario, frame_count: int):
    """Render ``frame_count`` frames and their ground truth."""
    validate(scenario, frame_count)
    frames = [render_frame(scenario, i) for i in range(frame_count)]
    truth = [truth_for(scenario, i) for i in range(frame_count)]
    return frames, truth


def truth_to_json(truth) -> str:
    return json.dumps({"frames": [t.to_dict() for t in truth]})


def truth_from_json(text: str) -> list:
    doc = json.loads(text)
    frames = []
    for f in doc["frames"]:
        objs = [TruthObject(o["label"], tuple(o["centroid"]), tuple(o["bbox"]), o["area"])
                for o in f["objects"]]
        frames.append(GroundTruthFrame(f["index"], objs))
    return frames
