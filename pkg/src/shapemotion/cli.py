"""Command-line entry point: ``shapemotion {run,synth,eval,bench}``.

Exit status is 0 on success, 1 on runtime errors and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import synth
from .evaluation import evaluate_sequence, format_table
from .imgio import GrayFrame, load_frame, save_gray
from .pipeline import PipelineConfig, format_benchmark, run_benchmark, run_stream
from .shapes import render_objects_image

FRAME_SUFFIXES = (".pgm", ".ppm")


class UsageError(Exception):
    pass


def list_frames(directory) -> list:
    """Frame files of a directory in lexicographic filename order."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"input directory {directory} does not exist")
    return sorted(p for p in directory.iterdir() if p.suffix.lower() in FRAME_SUFFIXES)


def iter_frames(paths, fps: float):
    for i, path in enumerate(paths):
        yield load_frame(path, index=i, fps=fps)


def build_config(args, **flag_overrides) -> PipelineConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(PipelineConfig.parse_overrides(Path(args.config).read_text()))
    values.update({k: v for k, v in flag_overrides.items() if v is not None})
    return PipelineConfig(**values)


def cmd_run(args) -> int:
    cfg = build_config(args, approach=args.approach, mode=_mode(args.mode), workers=args.workers)
    paths = list_frames(args.input)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.masks:
        (out / "masks").mkdir(exist_ok=True)
    with open(out / "results.jsonl", "w") as fh:
        for result in run_stream(iter_frames(paths, cfg.fps), cfg):
            fh.write(result.to_json() + "\n")
            if args.masks:
                h, w = _frame_shape(paths[0])
                image = render_objects_image(result.detections, w, h)
                save_gray(GrayFrame(image, result.index), out / "masks" / f"objects_{result.index:06d}.pgm")
    return 0


def _frame_shape(path):
    frame = load_frame(path)
    return frame.height, frame.width


def _mode(flag):
    return {"seq": "sequential", "par": "parallel", None: None}.get(flag, flag)


def cmd_synth(args) -> int:
    scenario = synth.load_scenario(args.scenario)
    frames, truth = synth.generate_sequence(scenario, args.frames)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for frame in frames:
        save_gray(frame, out / f"frame_{frame.index:06d}.pgm")
    (out / "truth.json").write_text(synth.truth_to_json(truth) + "\n")
    return 0


def read_predictions(path) -> dict:
    preds = {}
    with open(path) as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                preds[rec["frame"]] = rec["objects"]
    return preds


def cmd_eval(args) -> int:
    preds = read_predictions(args.pred)
    truth = synth.truth_from_json(Path(args.truth).read_text())
    counts = evaluate_sequence(preds, truth, args.iou)
    scene = args.scene or Path(args.pred).stem
    print(format_table([(scene, counts)]))
    return 0


def cmd_bench(args) -> int:
    cfg = build_config(args, workers=args.workers)
    frames = list(iter_frames(list_frames(args.input), cfg.fps))
    report = run_benchmark(frames, cfg, mode=_mode(args.mode))
    if report.timings[0].mode == "sequential":
        print(format_benchmark(report, None))
    else:
        print(format_benchmark(None, report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shapemotion",
                                     description="Detect moving geometric shapes in frame sequences.")
    sub = parser.add_subparsers(dest="command", metavar="{run,synth,eval,bench}")

    p = sub.add_parser("run", help="process a directory of P5/P6 frames")
    p.add_argument("--approach", choices=["background", "edge"], required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--mode", choices=["seq", "par"])
    p.add_argument("--workers", type=int)
    p.add_argument("--masks", action="store_true", help="also write detected-objects images")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("synth", help="render a synthetic scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--frames", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval", help="score JSONL predictions against truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--iou", type=float, default=0.5)
    p.add_argument("--scene")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="time the background approach per stage")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=["seq", "par"], required=True)
    p.add_argument("--workers", type=int)
    p.add_argument("--config")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"shapemotion: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
