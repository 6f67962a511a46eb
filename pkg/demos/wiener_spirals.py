"""
Hulls of planar Brownian paths
==============================

The 2D spectrum of the Wiener spiral is a planar Brownian path on [0, 1].
Its hull has mean perimeter 2 sqrt(2 pi) and mean area pi / 2, and two
independent paths have mean mixed area 2.

Grid paths under-cover the continuous hull, so estimates sit slightly
below their targets. The gap closes as the grid is refined.
"""

import math

import numpy as np

from gaussmix import (estimate_spiral_intrinsic, estimate_two_spirals_mixed,
                      factorized_mixed_area, spiral_intrinsic_target, spiral_pair_samples)
from gaussmix.montecarlo import aggregate

N_PATHS = 5_000

for n_steps in (100, 1_000, 5_000):
    est = estimate_spiral_intrinsic(2, n_steps, N_PATHS, seed=42)
    print(f"n_steps={n_steps:5d}: V_2 = {est.mean:.4f} +- {est.stderr:.4f}"
          f"   target {spiral_intrinsic_target(2):.4f}")

est = estimate_spiral_intrinsic(1, 2_000, N_PATHS, seed=42)
print(f"V_1 = {est.mean:.4f} +- {est.stderr:.4f}   target {spiral_intrinsic_target(1):.4f}")

est = estimate_two_spirals_mixed(2_000, N_PATHS, seed=42)
print(f"mixed area = {est.mean:.4f} +- {est.stderr:.4f}   target 2")

# the same number from the maximum of one coordinate and the other
# coordinate at that time
pairs = spiral_pair_samples(2_000, N_PATHS, seed=42)
m, h = aggregate(pairs.m), aggregate(pairs.h)
print(f"E max W1 = {m.mean:.4f}   target {math.sqrt(2 / math.pi):.4f}")
print(f"E W2(t*) = {h.mean:.4f}   target 0")
fac = factorized_mixed_area(pairs.m, pairs.h)
print(f"pi (E m^2 - E h^2) = {fac.mean:.4f} +- {fac.stderr:.4f}")
print("area correlation between the two paths", np.corrcoef(pairs.area1, pairs.area2)[0, 1])
