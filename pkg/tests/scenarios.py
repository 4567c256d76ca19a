"""Synthetic scene builders shared by several test modules."""
from shapemotion.synth import ObjectSpec, Scenario


def single_object_scenario(label="square", size=30, velocity=(3.0, 0.0), appear=30,
                           start=(-40.0, 120.0), noise=5.0, seed=3, **kw):
    """One object entering after the learning period. Trajectories use the
    absolute frame index, so the start lies off-canvas to the left."""
    obj = ObjectSpec(label, size, fill=200, start=start, velocity=velocity, appear=appear)
    return Scenario(objects=[obj], noise=noise, seed=seed, fps=10.0, **kw)


def static_scenario(noise=0.0, seed=0):
    objs = [ObjectSpec("square", 30, fill=200, start=(80.0, 120.0)),
            ObjectSpec("circle", 20, fill=150, start=(220.0, 100.0))]
    return Scenario(objects=objs, noise=noise, seed=seed)


def nested_squares_scenario():
    outer = ObjectSpec("square", 120, fill=90, start=(160.0, 120.0))
    inner = ObjectSpec("square", 40, fill=220, start=(160.0, 120.0))
    return Scenario(objects=[outer, inner], background=30, noise=2.0, seed=5)
