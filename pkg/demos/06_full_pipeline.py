"""
Both approaches on one synthetic sequence
=========================================

The background approach learns for 30 frames and then reports objects
that differ from the learned scene. The edge approach works on each frame
alone, so it also finds static shapes.
"""
from shapemotion import synth
from shapemotion.evaluation import compute_metrics, evaluate_sequence
from shapemotion.pipeline import PipelineConfig, run_stream

objs = [synth.ObjectSpec("circle", 18, fill=210, start=(-30.0, 80.0), velocity=(4.0, 1.0), appear=30),
        synth.ObjectSpec("rectangle", [60, 30], fill=120, start=(240.0, 190.0))]
scene = synth.Scenario(objects=objs, noise=4.0, seed=11, fps=10.0)
frames, truth = synth.generate_sequence(scene, 60)

for approach in ("background", "edge"):
    cfg = PipelineConfig(approach=approach, fps=scene.fps)
    results = list(run_stream(frames, cfg))
    last = results[-1]
    print(approach, "frame", last.index, [d.label for d in last.detections],
          "sad %.3f moving %s" % (last.motion.sad, last.motion.moving),
          "speeds", [round(t.speed, 3) for t in last.tracks if t.speed is not None])
    # score only the moving circle: truth for the frames it is visible
    moving_truth = [synth.GroundTruthFrame(t.index, [o for o in t.objects if o.label == "circle"])
                    for t in truth[30:]]
    preds = {r.index: [d for d in r.detections if d.label == "circle"] for r in results[30:]}
    counts = evaluate_sequence(preds, moving_truth)
    print("   moving circle:", counts, compute_metrics(counts))

print(results[-1].to_json())
