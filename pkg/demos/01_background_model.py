"""
Learning a background and cutting out what moves
=================================================

A running mean of the first frames gives the empty scene. Anything that
differs from it by more than lambda times the average difference is
foreground.
"""
import numpy as np

from shapemotion import synth
from shapemotion.background import (BackgroundModel, adaptive_threshold, effective_threshold,
                                    foreground_mask, mma_update)
from shapemotion.filters import apply_sequence, gaussian_blur

# a noisy scene; the square shows up at frame 30, after the model has learned
square = synth.ObjectSpec("square", 30, fill=200, start=(-40.0, 120.0), velocity=(3.0, 0.0), appear=30)
scene = synth.Scenario(objects=[square], noise=5.0, seed=3)
frames, truth = synth.generate_sequence(scene, 35)

model = BackgroundModel(scene.width, scene.height)
for frame in frames[:30]:
    model = mma_update(model, gaussian_blur(frame.pixels))
print("learned from", model.t, "frames; mean background level %.2f" % model.mean.mean())

# the running mean is exactly the arithmetic mean of what it has seen
stack = np.stack([gaussian_blur(f.pixels) for f in frames[:30]]).astype(float)
print("max deviation from np.mean: %.2e" % np.abs(model.mean - stack.mean(axis=0)).max())

img = gaussian_blur(frames[34].pixels)
delta = adaptive_threshold(img, model, lam=1.0)
mask = foreground_mask(img, model, effective_threshold(delta))
clean = apply_sequence(mask, ("open", "close"))
print("threshold %.2f, raw foreground %d px, after open+close %d px"
      % (delta, (mask > 0).sum(), (clean > 0).sum()))

(obj,) = truth[34].objects
ys, xs = np.nonzero(clean)
print("mask box  x %d..%d  y %d..%d" % (xs.min(), xs.max() + 1, ys.min(), ys.max() + 1))
print("truth box x %.1f..%.1f  y %.1f..%.1f" % (obj.bbox[0], obj.bbox[2], obj.bbox[1], obj.bbox[3]))
