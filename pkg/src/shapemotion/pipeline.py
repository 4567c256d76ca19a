"""Per-frame orchestration of the two detection approaches, stream state,
and the sequential/parallel stage benchmark.

Approach ``"background"``: gray -> blur -> running-mean update -> adaptive
threshold -> foreground mask -> morphology -> Canny on the cleaned mask ->
shape extraction -> objects image -> SAD vs previous image -> motion flag ->
association and speed. The first ``learning_period`` frames only train the
background model.

Approach ``"edge"``: gray -> blur -> Canny -> shape extraction -> objects
image -> SAD -> motion flag -> association and speed.
"""
from __future__ import annotations

import collections
import dataclasses
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import background as bg
from .edges import canny, default_thresholds, hysteresis, non_maximum_suppression, sobel_gradients
from .filters import apply_sequence, gaussian_blur
from .imgio import to_grayscale
from .motion import MotionReport, associate, motion_decision, sad_distance
from .parallel import band_map
from .shapes import ShapeConfig, extract_objects, render_objects_image

STAGES = ("BackgroundDetector", "ForegroundDetector", "MotionDetector")


@dataclass
class PipelineConfig:
    approach: str = "background"
    lam: float = 1.0
    learning_period: int = 30
    threshold_floor: float = 2.0
    background_update: str = "freeze"  # or "continuous": keep absorbing frames after learning
    t_max: int = 0  # 0 = uncapped learning rate
    blur_sigma: float = 1.4
    blur_radius: int = 2
    canny_low: float = 0.0  # 0 = derive from the frame's peak gradient
    canny_high: float = 0.0
    canny_high_ratio: float = 0.3
    canny_low_ratio: float = 0.5
    morph_ops: tuple = ("open", "close")
    morph_iterations: int = 1
    epsilon_fraction: float = 0.02
    min_area: float = 100.0
    right_angle_cos: float = 0.3
    square_side_ratio: float = 1.15
    circle_circularity: float = 0.85
    ellipse_circularity: float = 0.60
    circle_axis_ratio: float = 0.90
    sad_threshold: float = 0.5
    max_jump: float = 50.0
    meters_per_pixel: float = 0.01
    fps: float = 30.0
    mode: str = "sequential"
    workers: int = 4
    queue_capacity: int = 4

    def __post_init__(self):
        if isinstance(self.morph_ops, str):
            self.morph_ops = tuple(op for op in self.morph_ops.replace(",", " ").split() if op)
        else:
            self.morph_ops = tuple(self.morph_ops)
        self.validate()

    def validate(self):
        if self.approach not in ("background", "edge"):
            raise ValueError(f"approach must be 'background' or 'edge', not {self.approach!r}")
        if self.mode not in ("sequential", "parallel"):
            raise ValueError(f"mode must be 'sequential' or 'parallel', not {self.mode!r}")
        if self.background_update not in ("continuous", "freeze"):
            raise ValueError("background_update must be 'continuous' or 'freeze'")
        positive = ("lam", "blur_sigma", "blur_radius", "epsilon_fraction", "max_jump",
                    "meters_per_pixel", "fps", "workers", "queue_capacity", "morph_iterations")
        for name in positive:
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("learning_period", "threshold_floor", "t_max", "sad_threshold", "min_area"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if (self.canny_low or self.canny_high) and not 0 < self.canny_low < self.canny_high:
            raise ValueError("explicit Canny thresholds need 0 < low < high")

    def shape_config(self) -> ShapeConfig:
        return ShapeConfig(
            min_area=self.min_area, epsilon_fraction=self.epsilon_fraction,
            right_angle_cos=self.right_angle_cos, square_side_ratio=self.square_side_ratio,
            circle_circularity=self.circle_circularity,
            ellipse_circularity=self.ellipse_circularity,
            circle_axis_ratio=self.circle_axis_ratio)

    def replace(self, **changes) -> "PipelineConfig":
        return dataclasses.replace(self, **changes)

    # flat key=value text, one field per line, '#' comments
    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(value)
            lines.append(f"{f.name}={value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_overrides(cls, text: str) -> dict:
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        defaults = cls()
        out = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in types:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
            out[key] = _coerce(getattr(defaults, key), value)
        return out

    @classmethod
    def from_text(cls, text: str, **overrides) -> "PipelineConfig":
        values = cls.parse_overrides(text)
        values.update(overrides)
        return cls(**values)


def _coerce(default, value: str):
    if isinstance(default, bool):
        return value.lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float):
        return float(value)
    if isinstance(default, tuple):
        return tuple(v.strip() for v in value.split(",") if v.strip())
    return value


@dataclass
class FrameResult:
    index: int
    timestamp: float
    detections: list
    motion: MotionReport
    tracks: list
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "frame": self.index,
            "t": round(self.timestamp, 6),
            "objects": [d.to_dict() for d in self.detections],
            "sad": round(self.motion.sad, 6),
            "moving": self.motion.moving,
            "speeds": [{"label": t.label, "mps": round(t.speed, 6)}
                       for t in self.tracks if t.speed is not None],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def same_outcome(self, other: "FrameResult") -> bool:
        """Equality of everything except timings."""
        return self.to_dict() == other.to_dict()


@dataclass
class StreamState:
    """Mutable per-stream state; owned by one writer at a time."""

    model: bg.BackgroundModel | None = None
    shape: tuple | None = None
    last_index: int | None = None
    frames_seen: int = 0
    prev_image: np.ndarray | None = None
    tracks: list = field(default_factory=list)
    next_track_id: int = 0


def _check_order(state: StreamState, gray):
    if state.last_index is not None and gray.index <= state.last_index:
        raise ValueError(f"frame {gray.index} arrived after frame {state.last_index}")
    if state.shape is None:
        state.shape = gray.pixels.shape
    elif gray.pixels.shape != state.shape:
        raise ValueError(f"frame size changed from {state.shape} to {gray.pixels.shape}")
    state.last_index = gray.index


def _clock():
    return time.perf_counter()


def background_stage(state: StreamState, gray, cfg: PipelineConfig, executor=None):
    """Blur, model update, threshold, mask, morphology. Returns the cleaned
    mask, or None while the model is still learning."""
    nb = cfg.workers if executor is not None else 1
    blurred = band_map(lambda a: gaussian_blur(a, cfg.blur_sigma, cfg.blur_radius),
                       gray.pixels, cfg.blur_radius, executor, nb)
    if state.model is None:
        h, w = blurred.shape
        state.model = bg.BackgroundModel(w, h, t_max=cfg.t_max or None)
    learning = state.frames_seen < cfg.learning_period
    state.frames_seen += 1
    if learning or cfg.background_update == "continuous":
        state.model = bg.mma_update(state.model, blurred)
    if learning:
        return None
    delta = bg.adaptive_threshold(blurred, state.model, cfg.lam)
    mask = bg.foreground_mask(blurred, state.model, bg.effective_threshold(delta, cfg.threshold_floor))
    halo = 2 * cfg.morph_iterations * len(cfg.morph_ops)
    return band_map(lambda m: apply_sequence(m, cfg.morph_ops, cfg.morph_iterations),
                    mask, halo, executor, nb)


def _canny(img, cfg: PipelineConfig, blur: bool = True):
    if cfg.canny_high > 0:
        return canny(img, cfg.canny_low, cfg.canny_high, cfg.blur_sigma, cfg.blur_radius, blur=blur)
    src = gaussian_blur(img, cfg.blur_sigma, cfg.blur_radius) if blur else np.asarray(img)
    grad = sobel_gradients(src)
    low, high = default_thresholds(grad.magnitude, cfg.canny_high_ratio, cfg.canny_low_ratio)
    if high <= 0:
        return np.zeros(src.shape, dtype=np.uint8)
    return np.where(hysteresis(non_maximum_suppression(grad), low, high), 255, 0).astype(np.uint8)


def foreground_stage(source, index: int, cfg: PipelineConfig):
    """Edges, shape extraction and objects image. Pure; safe in a worker.

    ``source`` is the cleaned foreground mask (background approach) or the
    blurred gray frame (edge approach). Canny blurs it once more in both
    cases; on the edge approach the second pass steadies the contours of
    noisy frames enough for the corner count to be reliable.
    """
    t0 = _clock()
    h, w = source.shape
    edges = _canny(source, cfg, blur=True)
    detections = extract_objects(edges, index, cfg.shape_config())
    image = render_objects_image(detections, w, h)
    return detections, image, _clock() - t0


def motion_stage(state: StreamState, gray, detections, image, cfg: PipelineConfig):
    if state.prev_image is None:
        state.prev_image = np.zeros_like(image)
    sad = sad_distance(state.prev_image, image)
    report = MotionReport(sad, motion_decision(sad, cfg.sad_threshold), gray.index)
    tracks, state.next_track_id = associate(state.tracks, detections, gray.timestamp,
                                            cfg.max_jump, cfg.meters_per_pixel,
                                            state.next_track_id)
    state.prev_image = image
    state.tracks = tracks
    return report, tracks


def _idle_result(gray) -> FrameResult:
    return FrameResult(gray.index, gray.timestamp, [], MotionReport(0.0, False, gray.index), [])


def _front(state: StreamState, frame, cfg: PipelineConfig, executor=None):
    """Sequential, stateful first part of a frame; returns (gray, source, timing)."""
    gray = to_grayscale(frame)
    _check_order(state, gray)
    t0 = _clock()
    if cfg.approach == "background":
        source = background_stage(state, gray, cfg, executor)
    else:
        nb = cfg.workers if executor is not None else 1
        source = band_map(lambda a: gaussian_blur(a, cfg.blur_sigma, cfg.blur_radius),
                          gray.pixels, cfg.blur_radius, executor, nb)
    return gray, source, _clock() - t0


def _back(state: StreamState, gray, stage1, detections, image, stage2, cfg) -> FrameResult:
    t0 = _clock()
    report, tracks = motion_stage(state, gray, detections, image, cfg)
    timings = {STAGES[0]: stage1, STAGES[1]: stage2, STAGES[2]: _clock() - t0}
    return FrameResult(gray.index, gray.timestamp, detections, report, tracks, timings)


def process_frame(state: StreamState, frame, cfg: PipelineConfig) -> FrameResult:
    gray, source, stage1 = _front(state, frame, cfg)
    if source is None:
        result = _idle_result(gray)
        result.timings = {STAGES[0]: stage1}
        return result
    detections, image, stage2 = foreground_stage(source, gray.index, cfg)
    return _back(state, gray, stage1, detections, image, stage2, cfg)


def process_frame_a(state: StreamState, frame, cfg: PipelineConfig) -> FrameResult:
    """One frame of the background-subtraction approach."""
    return process_frame(state, frame, cfg.replace(approach="background"))


def process_frame_b(state: StreamState, frame, cfg: PipelineConfig) -> FrameResult:
    """One frame of the direct edge approach."""
    return process_frame(state, frame, cfg.replace(approach="edge"))


class Pipeline:
    """Stateful stream processor; feed frames in index order."""

    def __init__(self, config: PipelineConfig | None = None):
        self.config = config or PipelineConfig()
        self.state = StreamState()

    def process(self, frame) -> FrameResult:
        return process_frame(self.state, frame, self.config)

    def run(self, frames):
        return list(run_stream(frames, self.config, self.state))


def _run_sequential(frames, cfg, state):
    for frame in frames:
        yield process_frame(state, frame, cfg)


def _run_parallel(frames, cfg, state):
    # Stage 1 runs here in frame order (it owns the background model) using
    # row-band threads; stage 2 fans out to worker processes; stage 3 runs
    # here in frame order as futures complete. At most queue_capacity frames
    # are in flight.
    pending = collections.deque()
    with ThreadPoolExecutor(cfg.workers) as threads, ProcessPoolExecutor(cfg.workers) as procs:
        def drain_one():
            gray, stage1, fut = pending.popleft()
            if fut is None:
                result = _idle_result(gray)
                result.timings = {STAGES[0]: stage1}
                return result
            detections, image, stage2 = fut.result()
            return _back(state, gray, stage1, detections, image, stage2, cfg)

        for frame in frames:
            gray, source, stage1 = _front(state, frame, cfg, threads)
            fut = None if source is None else procs.submit(foreground_stage, source, gray.index, cfg)
            pending.append((gray, stage1, fut))
            if len(pending) >= cfg.queue_capacity:
                yield drain_one()
        while pending:
            yield drain_one()


def run_stream(frames, cfg: PipelineConfig, state: StreamState | None = None):
    """Yield a FrameResult per frame; the output does not depend on mode."""
    state = state if state is not None else StreamState()
    if cfg.mode == "parallel":
        return _run_parallel(frames, cfg, state)
    return _run_sequential(frames, cfg, state)


@dataclass
class StageTiming:
    stage: str
    mean_seconds: float
    mode: str
    calls: int = 0


@dataclass
class BenchmarkReport:
    timings: list
    results: list
    wall_seconds: float
    frames: int

    @property
    def seconds_per_frame(self) -> float:
        return self.wall_seconds / self.frames


def run_benchmark(frames, config: PipelineConfig | None = None, mode: str = "sequential",
                  workers: int | None = None) -> BenchmarkReport:
    """Run the background approach over ``frames`` and report per-stage means."""
    cfg = (config or PipelineConfig()).replace(
        approach="background", mode=mode, workers=workers or (config.workers if config else 4))
    frames = list(frames)
    if len(frames) < cfg.learning_period + 10:
        raise ValueError(f"benchmark needs at least {cfg.learning_period + 10} frames")
    t0 = _clock()
    results = list(run_stream(frames, cfg))
    wall = _clock() - t0
    timings = []
    for stage in STAGES:
        samples = [r.timings[stage] for r in results if stage in r.timings]
        mean = float(np.mean(samples)) if samples else 0.0
        timings.append(StageTiming(stage, mean, mode, len(samples)))
    return BenchmarkReport(timings, results, wall, len(frames))


def format_benchmark(sequential: BenchmarkReport | None, parallel: BenchmarkReport | None) -> str:
    """Table: Modules | Sequential time | Parallel time (mean seconds)."""
    def cell(report, i):
        return "-" if report is None else f"{report.timings[i].mean_seconds:.4f} sec"

    def total(report):
        return "-" if report is None else f"{report.seconds_per_frame:.4f} sec"

    rows = [(stage, cell(sequential, i), cell(parallel, i)) for i, stage in enumerate(STAGES)]
    rows.append(("Wall time per frame", total(sequential), total(parallel)))
    w0 = max(len("Modules"), *(len(r[0]) for r in rows))
    w1 = max(len("Sequential time"), *(len(r[1]) for r in rows))
    lines = [f"{'Modules':<{w0}} | {'Sequential time':<{w1}} | Parallel time"]
    lines += [f"{a:<{w0}} | {b:<{w1}} | {c}" for a, b, c in rows]
    return "\n".join(lines)


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)
