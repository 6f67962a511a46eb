"""Brownian paths as spectra of the Wiener spiral.

The ``k``-dimensional spectrum of the closed convex hull of the Wiener
spiral is distributed as the convex hull of a standard ``k``-dimensional
Brownian motion on ``[0, 1]``. Paths are simulated on a uniform grid, so
hull functionals are biased low (inner approximation); the acceptance
allowances absorb that bias.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .convex import Polytope, convex_hull
from .exceptions import GeometryError
from .mixed import kappa
from .montecarlo import Accumulator, MCEstimate, RngStream, default_seed, map_chunks
from .spectrum import spectral_constant

CHUNK = 64
MIN_PAIRS = 1000

__all__ = [
    "BrownianPath",
    "MaxStats",
    "SpiralPairSamples",
    "sample_brownian_path",
    "path_from_increments",
    "refine_path",
    "hull_of_path",
    "max_stats",
    "simulate_paths",
    "estimate_spiral_intrinsic",
    "spiral_intrinsic_target",
    "spiral_pair_samples",
    "estimate_two_spirals_mixed",
    "factorized_mixed_area",
    "max_stats_samples",
]


@dataclass(frozen=True)
class BrownianPath:
    times: np.ndarray
    values: np.ndarray
    stream: RngStream | None = None

    @property
    def k(self) -> int:
        return self.values.shape[1]

    @property
    def n_steps(self) -> int:
        return self.values.shape[0] - 1


@dataclass(frozen=True)
class MaxStats:
    """Maximum of the first coordinate, its (earliest) grid argmax, and the
    second coordinate at that time."""

    m: float
    t_star: float
    h_at_tstar: float


def _check_k(k, allowed=(1, 2, 3)):
    if k not in allowed:
        raise GeometryError(f"path dimension must be one of {allowed}, got {k}")


def simulate_paths(gen: np.random.Generator, batch: int, k: int, n_steps: int,
                   horizon: float = 1.0) -> np.ndarray:
    """``batch`` independent paths as a ``(batch, k, n_steps + 1)`` array
    starting at the origin."""
    z = gen.standard_normal((batch, k, n_steps))
    z *= math.sqrt(horizon / n_steps)
    out = np.zeros((batch, k, n_steps + 1))
    np.cumsum(z, axis=-1, out=out[..., 1:])
    return out


def sample_brownian_path(k: int, n_steps: int, stream: RngStream,
                         horizon: float = 1.0) -> BrownianPath:
    _check_k(k)
    if n_steps < 2:
        raise GeometryError(f"n_steps must be at least 2, got {n_steps}")
    values = simulate_paths(stream.generator(), 1, k, n_steps, horizon)[0].T.copy()
    return BrownianPath(np.linspace(0.0, horizon, n_steps + 1), values, stream)


def path_from_increments(increments, horizon: float = 1.0) -> BrownianPath:
    """Path with prescribed increments, shape ``(n_steps, k)``."""
    inc = np.asarray(increments, dtype=float)
    if inc.ndim != 2:
        raise GeometryError("increments must have shape (n_steps, k)")
    values = np.vstack([np.zeros((1, inc.shape[1])), np.cumsum(inc, axis=0)])
    return BrownianPath(np.linspace(0.0, horizon, inc.shape[0] + 1), values)


def refine_path(path: BrownianPath, stream: RngStream) -> BrownianPath:
    """Halve the grid step by Brownian-bridge midpoint insertion.

    The refined path passes through every original grid point.
    """
    dt = path.times[1] - path.times[0]
    x = path.values
    z = stream.generator().standard_normal((x.shape[0] - 1, x.shape[1]))
    mid = 0.5 * (x[:-1] + x[1:]) + math.sqrt(dt / 4.0) * z
    values = np.empty((2 * x.shape[0] - 1, x.shape[1]))
    values[0::2] = x
    values[1::2] = mid
    return BrownianPath(np.linspace(path.times[0], path.times[-1], values.shape[0]), values, stream)


def hull_of_path(path: BrownianPath) -> Polytope:
    _check_k(path.k)
    return convex_hull(path.values)


def max_stats(path: BrownianPath) -> MaxStats:
    if path.k != 2:
        raise GeometryError(f"max_stats needs a planar path, got k={path.k}")
    i = int(np.argmax(path.values[:, 0]))
    return MaxStats(float(path.values[i, 0]), float(path.times[i]), float(path.values[i, 1]))


def spiral_intrinsic_target(k: int) -> float:
    """Exact ``V_k`` of the closed convex hull of the Wiener spiral, ``kappa_k / k!``."""
    return kappa(k) / math.factorial(k)


def _spiral_chunk(size, stream, k, n_steps):
    paths = simulate_paths(stream.generator(), size, k, n_steps)
    if k == 1:
        vols = np.ptp(paths[:, 0, :], axis=1)
    else:
        vols = _kernels.batch_hull_area(paths, _kernels.HULL_EPS)
    acc = Accumulator()
    acc.update_batch(vols)
    return acc


def _merge(chunks) -> Accumulator:
    acc = Accumulator()
    for c in chunks:
        acc.merge(c)
    return acc


def estimate_spiral_intrinsic(k: int, n_steps: int = 10_000, n_paths: int = 100_000,
                              seed: int | None = None, workers: int = 1) -> MCEstimate:
    """Monte-Carlo ``V_k`` of the Wiener-spiral hull: scaled mean length
    (``k = 1``) or area (``k = 2``) of discretized Brownian hulls."""
    _check_k(k, (1, 2))
    if n_steps < 2:
        raise GeometryError(f"n_steps must be at least 2, got {n_steps}")
    if n_paths < 2:
        raise GeometryError("need at least 2 paths")
    seed = default_seed() if seed is None else seed
    stream = RngStream(seed).named(f"spiral-{k}")
    chunks = map_chunks(_spiral_chunk, n_paths, CHUNK, stream, (k, n_steps), workers)
    return _merge(chunks).estimate(seed).scaled(spectral_constant(k))


@dataclass(frozen=True)
class SpiralPairSamples:
    """Per-sample statistics of pairs of independent planar paths.

    ``mixed`` is the mixed area of the two hulls, ``area1``/``area2`` their
    areas; ``m``, ``h`` and ``t_star`` are the max statistics of the first
    path.
    """

    mixed: np.ndarray
    area1: np.ndarray
    area2: np.ndarray
    m: np.ndarray
    h: np.ndarray
    t_star: np.ndarray
    n_steps: int
    seed: int


def _pair_chunk(size, stream, n_steps, duplicate):
    gen = stream.generator()
    p = simulate_paths(gen, size, 2, n_steps)
    q = p if duplicate else simulate_paths(gen, size, 2, n_steps)
    mixed, a1, a2 = _kernels.batch_mixed_area(p, q, _kernels.HULL_EPS)
    idx = np.argmax(p[:, 0, :], axis=1)
    rows = np.arange(size)
    return mixed, a1, a2, p[rows, 0, idx], p[rows, 1, idx], idx / n_steps


def spiral_pair_samples(n_steps: int = 10_000, n_paths: int = 100_000,
                        seed: int | None = None, workers: int = 1,
                        duplicate: bool = False) -> SpiralPairSamples:
    """Simulate ``n_paths`` pairs of independent planar Brownian paths.

    With ``duplicate=True`` the second path of each pair is a copy of the
    first (the diagonal case, where the mixed area is the area).
    """
    if n_steps < 2:
        raise GeometryError(f"n_steps must be at least 2, got {n_steps}")
    if n_paths < 2:
        raise GeometryError("need at least 2 pairs")
    seed = default_seed() if seed is None else seed
    stream = RngStream(seed).named("spiral-pair")
    chunks = map_chunks(_pair_chunk, n_paths, CHUNK, stream, (n_steps, duplicate), workers)
    cols = [np.concatenate(c) for c in zip(*chunks)]
    return SpiralPairSamples(*cols, n_steps=n_steps, seed=seed)


def estimate_two_spirals_mixed(n_steps: int = 10_000, n_paths: int = 100_000,
                               seed: int | None = None, workers: int = 1) -> MCEstimate:
    """Monte-Carlo normalized mixed volume of the hulls of two orthogonal
    Wiener spirals: the mean planar mixed area of two independent Brownian
    hulls. The spectral constant for ``k = 2`` is exactly 1."""
    if n_paths < MIN_PAIRS:
        raise GeometryError(f"n_paths must be at least {MIN_PAIRS}, got {n_paths}")
    s = spiral_pair_samples(n_steps, n_paths, seed, workers)
    acc = Accumulator()
    acc.update_batch(s.mixed)
    return acc.estimate(s.seed)


def _max_chunk(size, stream, n_steps):
    p = simulate_paths(stream.generator(), size, 2, n_steps)
    idx = np.argmax(p[:, 0, :], axis=1)
    rows = np.arange(size)
    return p[rows, 0, idx], p[rows, 1, idx], idx / n_steps


def max_stats_samples(n_steps: int = 10_000, n_paths: int = 100_000,
                      seed: int | None = None, workers: int = 1):
    """Vectorized :func:`max_stats` over ``n_paths`` planar paths.

    Returns arrays ``(m, h, t_star)``.
    """
    if n_steps < 2:
        raise GeometryError(f"n_steps must be at least 2, got {n_steps}")
    if n_paths < 2:
        raise GeometryError("need at least 2 paths")
    seed = default_seed() if seed is None else seed
    stream = RngStream(seed).named("bm-max")
    chunks = map_chunks(_max_chunk, n_paths, CHUNK, stream, (n_steps,), workers)
    return tuple(np.concatenate(c) for c in zip(*chunks))


def factorized_mixed_area(m, h, seed: int | None = None) -> MCEstimate:
    """``pi ((E m)^2 - (E h)^2)`` from samples of the support value ``m`` and
    its angular derivative ``h``, with a delta-method standard error."""
    m = np.asarray(m, dtype=float)
    h = np.asarray(h, dtype=float)
    n = m.size
    mm, mh = float(m.mean()), float(h.mean())
    cov = np.cov(np.vstack([m, h])) / n
    grad = np.array([2.0 * math.pi * mm, -2.0 * math.pi * mh])
    var = float(grad @ cov @ grad)
    return MCEstimate(math.pi * (mm * mm - mh * mh), math.sqrt(max(var, 0.0)), n, seed)
