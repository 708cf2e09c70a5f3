import numpy as np


def tangent_sample(immersion, rng, count):
    """Uniform chart points inside the sampling box."""
    return [np.array([rng.uniform(lo, hi) for lo, hi in immersion.sampling_box]) for _ in range(count)]
