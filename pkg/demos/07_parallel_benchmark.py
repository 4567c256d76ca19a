"""
Sequential and parallel execution
=================================

The stateful background update stays in frame order while edge, contour
and shape work fans out to worker processes. Results must not depend on
the mode; the speed-up depends on the host.
"""
import os

from shapemotion import synth
from shapemotion.pipeline import PipelineConfig, format_benchmark, run_benchmark

square = synth.ObjectSpec("square", 50, fill=200, start=(-40.0, 240.0), velocity=(5.0, 0.0), appear=30)
scene = synth.Scenario(width=640, height=480, objects=[square], noise=4.0, seed=2, fps=10.0)
frames, _ = synth.generate_sequence(scene, 60)

workers = max(2, os.cpu_count() or 1)
seq = run_benchmark(frames, PipelineConfig(fps=10.0), "sequential")
par = run_benchmark(frames, PipelineConfig(fps=10.0), "parallel", workers)
print(format_benchmark(seq, par))
print("identical results:", [r.to_json() for r in seq.results] == [r.to_json() for r in par.results])
print("cores: %d, wall-time ratio %.2fx" % (os.cpu_count() or 1, seq.wall_seconds / par.wall_seconds))
