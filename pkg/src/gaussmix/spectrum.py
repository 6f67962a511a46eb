"""Gaussian-projection estimators of intrinsic and mixed volumes.

For ``K`` in ``R^d`` and a ``k x d`` matrix ``A`` with iid standard normal
entries,

    V_k(K) = (2 pi)^(k/2) / (k! kappa_k) * E Vol_k(A K)

and, for ``k`` bodies hit by the same matrix, the normalized mixed volume
is the same constant times ``E V_k(A K_1, ..., A K_k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import _kernels
from .convex import Polytope, linear_image, minkowski_sum
from .exceptions import GeometryError
from .mixed import kappa
from .montecarlo import MCEstimate, RngStream, aggregate, default_seed, map_chunks

MAX_K = 3
MIN_SAMPLES = 100
CHUNK = 2000

__all__ = [
    "GaussianMatrix",
    "SpectrumSample",
    "sample_gaussian_matrix",
    "project_body",
    "spectrum_sample",
    "spectral_constant",
    "constant_c",
    "estimate_intrinsic_volume",
    "estimate_mixed_volume",
    "projected_volumes",
]


@dataclass(frozen=True)
class GaussianMatrix:
    entries: np.ndarray
    stream: RngStream | None = None

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    @property
    def d(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class SpectrumSample:
    """Images of several bodies under one matrix draw."""

    matrix: GaussianMatrix
    images: tuple[Polytope, ...]


def sample_gaussian_matrix(k: int, d: int, stream: RngStream) -> GaussianMatrix:
    if not 1 <= k <= d:
        raise GeometryError(f"need 1 <= k <= d, got k={k}, d={d}")
    entries = stream.generator().standard_normal((k, d))
    entries.setflags(write=False)
    return GaussianMatrix(entries, stream)


def project_body(a: GaussianMatrix | np.ndarray, body: Polytope) -> Polytope:
    entries = a.entries if isinstance(a, GaussianMatrix) else np.asarray(a, dtype=float)
    if entries.shape[1] != body.dim_ambient:
        raise GeometryError(
            f"matrix acts on dimension {entries.shape[1]}, body lives in {body.dim_ambient}")
    return linear_image(body, entries)


def spectrum_sample(a: GaussianMatrix, bodies) -> SpectrumSample:
    return SpectrumSample(a, tuple(project_body(a, b) for b in bodies))


def spectral_constant(k: int) -> float:
    """``(2 pi)^(k/2) / (k! kappa_k)``."""
    return (2.0 * math.pi) ** (k / 2.0) / (math.factorial(k) * kappa(k))


def constant_c(k: int, d: int) -> float:
    """``kappa_(d-k) (2 pi)^(k/2) / (k! C(d, k) kappa_k)``: converts an expected
    projected mixed volume into ``V_d(K_1..K_k, B..B)``."""
    if not 1 <= k <= d:
        raise GeometryError(f"need 1 <= k <= d, got k={k}, d={d}")
    return kappa(d - k) * spectral_constant(k) / math.comb(d, k)


def projected_volumes(vertices: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """``Vol_k(conv(A_b V))`` for a stack of matrices ``mats`` of shape
    ``(batch, k, d)`` and a vertex array of shape ``(n, d)``."""
    proj = np.ascontiguousarray(np.einsum("bkd,nd->bkn", mats, vertices))
    k = mats.shape[1]
    if k == 1:
        return np.ptp(proj[:, 0, :], axis=1)
    if k == 2:
        return _kernels.batch_hull_area(proj, _kernels.HULL_EPS)
    out = np.empty(proj.shape[0])
    for b in range(proj.shape[0]):
        try:
            out[b] = ConvexHull(proj[b].T).volume
        except QhullError:
            out[b] = 0.0
    return out


def _check_samples(n_samples: int):
    if n_samples < MIN_SAMPLES:
        raise GeometryError(f"n_samples must be at least {MIN_SAMPLES}, got {n_samples}")


def _intrinsic_chunk(size, stream, vertices, k):
    mats = stream.generator().standard_normal((size, k, vertices.shape[1]))
    return projected_volumes(vertices, mats)


def estimate_intrinsic_volume(body: Polytope, k: int, n_samples: int = 100_000,
                              seed: int | None = None, workers: int = 1,
                              chunk_size: int = CHUNK) -> MCEstimate:
    """Monte-Carlo ``V_k(body)`` from Gaussian projections into ``R^k``."""
    d = body.dim_ambient
    if not 1 <= k <= d:
        raise GeometryError(f"need 1 <= k <= d, got k={k}, d={d}")
    if k > MAX_K:
        raise GeometryError(f"k is limited to {MAX_K}")
    _check_samples(n_samples)
    seed = default_seed() if seed is None else seed
    stream = RngStream(seed).named("spectrum")
    chunks = map_chunks(_intrinsic_chunk, n_samples, chunk_size, stream,
                        (body.vertices, k), workers)
    return aggregate(chunks, seed).scaled(spectral_constant(k))


def _subset_sums(bodies):
    # vertex arrays of sum_{i in S} K_i for every non-empty S, keyed by bitmask
    sums = {}
    for mask in range(1, 1 << len(bodies)):
        top = mask.bit_length() - 1
        rest = mask & ~(1 << top)
        sums[mask] = bodies[top] if rest == 0 else minkowski_sum(sums[rest], bodies[top])
    return [(mask, p.vertices) for mask, p in sums.items()]


def _mixed_chunk(size, stream, subset_vertices, k, d):
    mats = stream.generator().standard_normal((size, k, d))
    total = np.zeros(size)
    for mask, verts in subset_vertices:
        sign = -1.0 if (k - bin(mask).count("1")) % 2 else 1.0
        total += sign * projected_volumes(verts, mats)
    return total / math.factorial(k)


def estimate_mixed_volume(bodies, n_samples: int = 100_000, seed: int | None = None,
                          workers: int = 1, chunk_size: int = CHUNK) -> MCEstimate:
    """Monte-Carlo normalized mixed volume of ``k`` polytopes in ``R^d``.

    Every sample projects all bodies with one matrix and takes the planar
    (or spatial) mixed volume of the images by polarization. The images of
    subset sums are projections of the precomputed sums, since
    ``A(K + L) = AK + AL``.

    Multiply by ``kappa(d - k) / C(d, k)`` to get ``V_d(K_1..K_k, B..B)``.
    """
    bodies = list(bodies)
    k = len(bodies)
    if k == 0:
        raise GeometryError("at least one body is required")
    dims = {b.dim_ambient for b in bodies}
    if len(dims) != 1:
        raise GeometryError(f"bodies live in different dimensions: {sorted(dims)}")
    d = dims.pop()
    if k > d:
        raise GeometryError(f"{k} bodies exceed the dimension {d}")
    if k > MAX_K:
        raise GeometryError(f"k is limited to {MAX_K}")
    _check_samples(n_samples)
    seed = default_seed() if seed is None else seed
    stream = RngStream(seed).named("spectrum")
    chunks = map_chunks(_mixed_chunk, n_samples, chunk_size, stream,
                        (_subset_sums(bodies), k, d), workers)
    return aggregate(chunks, seed).scaled(spectral_constant(k))
