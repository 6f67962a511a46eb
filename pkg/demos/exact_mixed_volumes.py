"""
Exact mixed volumes of polytopes
================================

Two deterministic routes to the same number: inclusion-exclusion over
Minkowski sums, and a least-squares fit of the volume polynomial.
"""

import numpy as np

from gaussmix import (ball_polytope, box, convex_hull, mixed_volume_bracket,
                      mixed_volume_interpolation, mixed_volume_polarization, steiner_fit)

# two axis-parallel rectangles: the mixed area is (1*4 + 2*3) / 2 = 5
r1 = box((1.0, 2.0))
r2 = box((3.0, 4.0))
print("polarization  ", mixed_volume_polarization([r1, r2]))
print("interpolation ", mixed_volume_interpolation([r1, r2]))

# random planar hulls agree to round-off
rng = np.random.default_rng(0)
p = convex_hull(rng.uniform(-1, 1, (8, 2)))
q = convex_hull(rng.uniform(-1, 1, (6, 2)) + 1.5)
a = mixed_volume_polarization([p, q])
b = mixed_volume_interpolation([p, q])
print(f"random pair   {a:.12f}  {b:.12f}  gap {abs(a - b) / abs(a):.1e}")

# a ball slot has no exact polytope; inscribed and circumscribed
# polygons bracket it, and both tighten as the polygon is refined
square = box((1.0, 1.0))
for n in (16, 64, 256):
    lo, hi = mixed_volume_bracket([square], 2, n_ball=n)
    print(f"V(square, B) with {n:3d}-gons in [{lo:.6f}, {hi:.6f}]")

# the Steiner polynomial of the square: area + perimeter * r + pi r^2
fit = steiner_fit(square, n_ball=512)
print("Steiner coefficients", np.round(fit.coeffs, 4))
print("intrinsic volumes   ", np.round(fit.intrinsic_volumes(), 4))

# the unit cube against the 3D ball surrogate
cube = box((1.0, 1.0, 1.0))
lo, hi = mixed_volume_bracket([cube, cube], 3, n_ball=64)
print(f"V(C, C, B) in [{lo:.4f}, {hi:.4f}]  (surface area / 3 = 2)")
print("3D ball surrogate has", ball_polytope(3, 64).n_vertices, "vertices")
