"""
Intrinsic volumes from Gaussian projections
===========================================

Project a body by a k x d standard Gaussian matrix, take the k-volume of
the image, average. After a fixed normalization this is V_k, and the
answer does not depend on the ambient dimension.
"""

from gaussmix import (box, embed, estimate_intrinsic_volume, estimate_mixed_volume,
                      mixed_volume_polarization, segment)

N = 50_000

square = box((1.0, 1.0))
for k, exact in ((1, 2.0), (2, 1.0)):
    est = estimate_intrinsic_volume(square, k, N, seed=42)
    lo, hi = est.ci95
    print(f"V_{k}(square) = {est.mean:.4f} +- {est.stderr:.4f}   95% CI [{lo:.4f}, {hi:.4f}]"
          f"   exact {exact}")

# a unit segment has V_1 = 1 in every dimension
for d in range(1, 5):
    u = segment([0.0] * d, [1.0] + [0.0] * (d - 1))
    est = estimate_intrinsic_volume(u, 1, N, seed=d)
    print(f"d={d}: V_1(segment) = {est.mean:.4f} +- {est.stderr:.4f}")

# zero-padding into a larger space leaves the normalized mixed volume alone
r1, r2 = box((1.0, 2.0)), box((3.0, 4.0))
print("exact mixed area", mixed_volume_polarization([r1, r2]))
for d in (2, 3, 4):
    est = estimate_mixed_volume([embed(r1, d), embed(r2, d)], N, seed=7)
    print(f"d={d}: {est.mean:.4f} +- {est.stderr:.4f}")

# standard error shrinks like 1 / sqrt(n)
errs = [estimate_intrinsic_volume(square, 2, n, seed=1).stderr for n in (2_000, 8_000, 32_000)]
print("stderr ratios", [round(errs[i] / errs[i + 1], 2) for i in range(2)], "expected", 2.0)
