"""
Is anything moving, and how fast?
=================================

The motion signal is the mean absolute difference between consecutive
images of detected objects. Speed comes from centroid displacement.
"""
import numpy as np

from shapemotion.motion import TrackedObject, associate, estimate_speed, sad_distance

a = np.array([[0, 10], [20, 30]], np.uint8)
b = np.array([[5, 10], [20, 26]], np.uint8)
print("SAD of the 2x2 example:", sad_distance(a, b))

prev = TrackedObject("square", (100.0, 50.0), timestamp=1.0)
cur = TrackedObject("square", (106.0, 58.0), timestamp=1.5)
print("10 px in 0.5 s at 1 cm/px: %.2f m/s" % estimate_speed(prev, cur, 0.01))


class Detection:
    def __init__(self, label, centroid):
        self.label, self.centroid = label, centroid


# two squares crossing paths: greedy matching takes the closest pair first
tracks, next_id = associate([], [Detection("square", (10.0, 10.0)), Detection("square", (30.0, 10.0))], 0.0)
tracks, next_id = associate(tracks, [Detection("square", (27.0, 10.0)), Detection("square", (13.0, 10.0))],
                            0.1, next_id=next_id)
for t in tracks:
    print("track %d at %s, %.2f m/s" % (t.track_id, t.centroid, t.speed))
