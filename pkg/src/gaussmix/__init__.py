"""Exact and Gaussian-spectrum estimates of intrinsic and mixed volumes.

The exact side works with V-polytopes in dimension up to 4 (hulls up to 6):
polarization and Minkowski-polynomial interpolation for mixed volumes,
Steiner-polynomial fits for intrinsic volumes. The stochastic side
estimates the same functionals from Gaussian projections of the bodies,
and from planar Brownian paths for the Wiener spiral.
"""

from .brownian import (BrownianPath, MaxStats, estimate_spiral_intrinsic,
                       estimate_two_spirals_mixed, factorized_mixed_area, hull_of_path,
                       max_stats, refine_path, sample_brownian_path, spiral_intrinsic_target,
                       spiral_pair_samples)
from .convex import (Polytope, ball_polytope, box, convex_hull, embed, linear_image,
                     minkowski_sum, perimeter, scale, segment, translate, volume)
from .exceptions import ConfigError, GeometryError, NumericalError
from .mixed import (MixedVolumeResult, SteinerCoefficients, extrapolate_ball_limit,
                    intrinsic_volume_box, kappa, mean_support, mixed_volume_bracket,
                    mixed_volume_interpolation, mixed_volume_polarization,
                    normalized_mixed_volume, steiner_fit)
from .montecarlo import (Accumulator, ExperimentReport, MCEstimate, RngStream, aggregate,
                         run_experiment)
from .spectrum import (GaussianMatrix, constant_c, estimate_intrinsic_volume,
                       estimate_mixed_volume, project_body, sample_gaussian_matrix,
                       spectral_constant)
from .support import (SupportProfile, cauchy_area, cauchy_length, cauchy_mixed_area,
                      support_profile)

__version__ = "0.1.0"

__all__ = [
    "Accumulator", "BrownianPath", "ConfigError", "ExperimentReport", "GaussianMatrix",
    "GeometryError", "MCEstimate", "MaxStats", "MixedVolumeResult", "NumericalError",
    "Polytope", "RngStream", "SteinerCoefficients", "SupportProfile", "aggregate",
    "ball_polytope", "box", "cauchy_area", "cauchy_length", "cauchy_mixed_area",
    "constant_c", "convex_hull", "embed", "estimate_intrinsic_volume", "estimate_mixed_volume",
    "estimate_spiral_intrinsic", "estimate_two_spirals_mixed", "extrapolate_ball_limit",
    "factorized_mixed_area", "hull_of_path", "intrinsic_volume_box", "kappa",
    "linear_image", "max_stats", "mean_support", "minkowski_sum", "mixed_volume_bracket",
    "mixed_volume_interpolation", "mixed_volume_polarization", "normalized_mixed_volume",
    "perimeter", "project_body", "refine_path", "run_experiment", "sample_brownian_path",
    "sample_gaussian_matrix", "scale", "segment", "spectral_constant", "spiral_intrinsic_target",
    "spiral_pair_samples", "steiner_fit", "support_profile", "translate", "volume",
]
