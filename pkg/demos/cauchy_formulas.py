"""
Cauchy formulas on support functions
====================================

Perimeter, area and mixed area of planar bodies from the support function
M(phi) alone, checked against the polygon oracles.
"""

import numpy as np

from gaussmix import (box, cauchy_area, cauchy_length, cauchy_mixed_area, convex_hull,
                      mixed_volume_polarization, perimeter, support_profile, volume)

rng = np.random.default_rng(3)
hull = convex_hull(rng.random((30, 2)))
print(f"oracle: perimeter {perimeter(hull):.6f}, area {volume(hull):.6f}")

# corners make M' jump, so the area quadrature converges as the grid grows
for m in (512, 1024, 2048, 4096):
    p = support_profile(hull, m)
    print(f"m={m:4d}: length {cauchy_length(p):.6f}, area {cauchy_area(p):.6f}")

r1 = support_profile(box((1.0, 2.0)), 4096)
r2 = support_profile(box((3.0, 4.0)), 4096)
print("mixed area of rectangles", cauchy_mixed_area(r1, r2),
      "polarization", mixed_volume_polarization([box((1.0, 2.0)), box((3.0, 4.0))]))

# support functions add under Minkowski sum
print("summed profile, 8 angles:", np.round((r1 + r2).values[::512], 4))
print(r1.to_csv().splitlines()[:3])
