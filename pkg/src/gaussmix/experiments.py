"""Built-in experiments for :func:`gaussmix.montecarlo.run_experiment`.

Each experiment returns an :class:`ExperimentReport` carrying its target
and the bias allowance on top of the 1.96-sigma band.
"""

from __future__ import annotations

import math

from .brownian import (estimate_spiral_intrinsic, estimate_two_spirals_mixed,
                       max_stats_samples, spiral_intrinsic_target)
from .convex import Polytope
from .exceptions import ConfigError
from .montecarlo import ExperimentReport, aggregate, default_seed, register_experiment
from .spectrum import estimate_intrinsic_volume, estimate_mixed_volume

# discretization allowances for 10^4-step paths
SPIRAL_MIXED_ALLOWANCE = 0.04
SPIRAL_INTRINSIC_ALLOWANCE = 0.03
BM_MAX_ALLOWANCE = 0.02
BM_CDF_ALLOWANCE = 0.01

MAX_MEAN = math.sqrt(2.0 / math.pi)
MAX_CDF_AT_1 = math.erf(1.0 / math.sqrt(2.0))


def _seed(seed):
    return default_seed() if seed is None else int(seed)


def _body(spec) -> Polytope:
    if isinstance(spec, Polytope):
        return spec
    if isinstance(spec, dict):
        return Polytope.from_dict(spec)
    if isinstance(spec, str):
        return Polytope.load(spec)
    raise ConfigError(f"cannot interpret {spec!r} as a polytope")


@register_experiment("spiral_mixed")
def spiral_mixed(n_steps=10_000, n_paths=100_000, seed=None, workers=1,
                 allowance=SPIRAL_MIXED_ALLOWANCE):
    seed = _seed(seed)
    est = estimate_two_spirals_mixed(n_steps, n_paths, seed, workers)
    return ExperimentReport("spiral_mixed", est, 2.0, allowance,
                            {"n_steps": n_steps, "n_paths": n_paths})


@register_experiment("spiral_intrinsic")
def spiral_intrinsic(k=2, n_steps=10_000, n_paths=100_000, seed=None, workers=1,
                     allowance=SPIRAL_INTRINSIC_ALLOWANCE):
    seed = _seed(seed)
    est = estimate_spiral_intrinsic(k, n_steps, n_paths, seed, workers)
    return ExperimentReport(f"spiral_intrinsic_k{k}", est, spiral_intrinsic_target(k), allowance,
                            {"k": k, "n_steps": n_steps, "n_paths": n_paths})


def _max_reports(n_steps, n_paths, seed, workers, max_allowance, cdf_allowance):
    seed = _seed(seed)
    m, h, _ = max_stats_samples(n_steps, n_paths, seed, workers)
    params = {"n_steps": n_steps, "n_paths": n_paths}
    return [
        ExperimentReport("bm_max", aggregate(m, seed), MAX_MEAN, max_allowance, params),
        ExperimentReport("bm_argmax_h", aggregate(h, seed), 0.0, 0.0, params),
        ExperimentReport("bm_max_cdf1", aggregate((m <= 1.0).astype(float), seed),
                         MAX_CDF_AT_1, cdf_allowance, params),
    ]


@register_experiment("bm_max")
def bm_max(n_steps=10_000, n_paths=100_000, seed=None, workers=1, allowance=BM_MAX_ALLOWANCE):
    return _max_reports(n_steps, n_paths, seed, workers, allowance, BM_CDF_ALLOWANCE)[0]


@register_experiment("bm_argmax_h")
def bm_argmax_h(n_steps=10_000, n_paths=100_000, seed=None, workers=1):
    return _max_reports(n_steps, n_paths, seed, workers, BM_MAX_ALLOWANCE, BM_CDF_ALLOWANCE)[1]


@register_experiment("bm_max_cdf1")
def bm_max_cdf1(n_steps=10_000, n_paths=100_000, seed=None, workers=1,
                allowance=BM_CDF_ALLOWANCE):
    return _max_reports(n_steps, n_paths, seed, workers, BM_MAX_ALLOWANCE, allowance)[2]


def bm_stats(n_steps=10_000, n_paths=100_000, seed=None, workers=1):
    """All three max-statistics reports from one set of paths."""
    return _max_reports(n_steps, n_paths, seed, workers, BM_MAX_ALLOWANCE, BM_CDF_ALLOWANCE)


@register_experiment("intrinsic")
def intrinsic(body, k, n_samples=100_000, seed=None, workers=1, target=None, allowance=0.0):
    seed = _seed(seed)
    est = estimate_intrinsic_volume(_body(body), int(k), n_samples, seed, workers)
    return ExperimentReport(f"intrinsic_k{k}", est, target, allowance,
                            {"k": int(k), "n_samples": n_samples})


@register_experiment("mixed")
def mixed(bodies, n_samples=100_000, seed=None, workers=1, target=None, allowance=0.0):
    seed = _seed(seed)
    polys = [_body(b) for b in bodies]
    est = estimate_mixed_volume(polys, n_samples, seed, workers)
    return ExperimentReport(f"mixed_k{len(polys)}", est, target, allowance,
                            {"k": len(polys), "n_samples": n_samples})
