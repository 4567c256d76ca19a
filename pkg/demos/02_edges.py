"""
Canny edges from scratch
========================

Blur, Sobel gradients, thinning along the gradient direction, then two
thresholds with connectivity. A step edge comes out one pixel wide.
"""
import numpy as np

from shapemotion.edges import canny, non_maximum_suppression, sobel_gradients
from shapemotion.filters import gaussian_blur

step = np.zeros((16, 16), np.uint8)
step[:, 8:] = 255

g = sobel_gradients(gaussian_blur(step))
print("peak gradient %.0f at columns %s" % (g.magnitude.max(),
                                            np.unique(np.nonzero(g.magnitude == g.magnitude.max())[1])))
thin = non_maximum_suppression(g)
print("columns surviving thinning:", np.unique(np.nonzero(thin)[1]))

edges = canny(step, low=20, high=60)
print("edge columns:", np.unique(np.nonzero(edges)[1]), " pixels:", (edges > 0).sum())

# raising either threshold can only remove edge pixels
rng = np.random.default_rng(0)
noise = rng.integers(0, 256, (32, 32)).astype(np.uint8)
for low, high in [(30, 90), (30, 150), (80, 150)]:
    print("low %3d high %3d -> %3d edge pixels" % (low, high, (canny(noise, low, high) > 0).sum()))
