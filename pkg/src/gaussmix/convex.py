"""Exact convex geometry on V-polytopes: hulls, Minkowski sums, volumes.

Polytopes are stored by their extreme points only. Planar polytopes keep
their vertices in counterclockwise boundary order; in dimension three and
above the order is qhull's (sorted input index).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull

from . import _kernels
from .exceptions import GeometryError

MAX_DIM = 6
HULL_EPS = _kernels.HULL_EPS

__all__ = [
    "Polytope",
    "convex_hull",
    "minkowski_sum",
    "scale",
    "translate",
    "linear_image",
    "embed",
    "volume",
    "perimeter",
    "ball_polytope",
    "box",
    "segment",
    "affine_frame",
]


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex hull of finitely many points, stored by its extreme points.

    Build instances with :func:`convex_hull`; the constructor trusts that
    every row of ``vertices`` is extreme.
    """

    vertices: np.ndarray
    dim_affine: int = field(init=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float, copy=True)
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[1] == 0:
            raise GeometryError("vertices must be a non-empty (n, d) array")
        if not np.all(np.isfinite(v)):
            raise GeometryError("vertex coordinates must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "dim_affine", affine_frame(v)[0])

    @property
    def dim_ambient(self) -> int:
        return self.vertices.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    def __repr__(self):
        return (f"Polytope(n_vertices={self.n_vertices}, dim_ambient={self.dim_ambient}, "
                f"dim_affine={self.dim_affine})")

    def same_vertex_set(self, other: "Polytope", atol: float = 1e-9) -> bool:
        """True if both polytopes have the same extreme points up to ``atol``."""
        if self.dim_ambient != other.dim_ambient or self.n_vertices != other.n_vertices:
            return False
        a = self.vertices[np.lexsort(self.vertices.T[::-1])]
        b = other.vertices[np.lexsort(other.vertices.T[::-1])]
        if np.allclose(a, b, rtol=0.0, atol=atol):
            return True
        # lexicographic order is fragile under ties; fall back to matching
        d = np.linalg.norm(self.vertices[:, None, :] - other.vertices[None, :, :], axis=-1)
        return bool(np.all(d.min(axis=1) <= atol) and np.all(d.min(axis=0) <= atol))

    def to_dict(self) -> dict:
        return {"dim": self.dim_ambient, "vertices": self.vertices.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Polytope":
        try:
            dim = int(data["dim"])
            verts = np.asarray(data["vertices"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise GeometryError(f"malformed polytope record: {exc}") from exc
        if verts.ndim != 2 or verts.shape[1] != dim:
            raise GeometryError(f"vertices do not match declared dimension {dim}")
        return convex_hull(verts)

    @classmethod
    def from_json(cls, text: str, source: str = "<string>") -> "Polytope":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GeometryError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "Polytope":
        """Read a fixture; parse errors carry ``path:line:col``."""
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise GeometryError(f"cannot read {path}: {exc.strerror}") from exc
        return cls.from_json(text, str(path))


def _as_points(points) -> np.ndarray:
    if isinstance(points, Polytope):
        return points.vertices
    try:
        pts = np.asarray(points, dtype=float)
    except ValueError as exc:
        # ragged input: rows of different lengths
        raise GeometryError("points must share one dimension") from exc
    if pts.size == 0:
        raise GeometryError("cannot take the hull of an empty point set")
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise GeometryError("points must form an (n, d) array")
    if not np.all(np.isfinite(pts)):
        raise GeometryError("point coordinates must be finite")
    return pts


def affine_frame(points: np.ndarray, eps: float = HULL_EPS):
    """Affine dimension of a point set with an orthonormal basis of its span.

    Returns ``(r, center, basis)`` where ``basis`` has shape ``(r, d)``.
    """
    center = points.mean(axis=0)
    centered = points - center
    if points.shape[0] == 1:
        return 0, center, np.zeros((0, points.shape[1]))
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    if s[0] == 0.0:
        return 0, center, np.zeros((0, points.shape[1]))
    r = int(np.sum(s > eps * s[0]))
    # a cloud much smaller than its distance to the origin is a point
    if s[0] <= 1e-13 * max(1.0, float(np.abs(center).max())):
        r = 0
    return r, center, vt[:r]


def _extreme_indices(coords: np.ndarray) -> np.ndarray:
    """Extreme-point indices of a full-dimensional point cloud."""
    r = coords.shape[1]
    if r == 1:
        t = coords[:, 0]
        return np.array([int(np.argmin(t)), int(np.argmax(t))])
    if r == 2:
        x = np.ascontiguousarray(coords[:, 0])
        y = np.ascontiguousarray(coords[:, 1])
        return _kernels.hull_indices(x, y, HULL_EPS)
    return np.asarray(ConvexHull(coords).vertices, dtype=np.int64)


def convex_hull(points) -> Polytope:
    """Convex hull of a finite point set.

    Parameters
    ----------
    points : array_like, shape (n, d)
        Non-empty, finite, ``d <= 6``.

    Returns
    -------
    Polytope
        The extreme points of the input. Planar results are in
        counterclockwise order.
    """
    pts = _as_points(points)
    d = pts.shape[1]
    if d > MAX_DIM:
        raise GeometryError(f"dimension {d} exceeds the supported maximum {MAX_DIM}")
    r, center, basis = affine_frame(pts)
    if r == 0:
        return Polytope(pts[:1])
    if r == d:
        coords = pts - center
    else:
        coords = (pts - center) @ basis.T
    idx = _extreme_indices(coords)
    return Polytope(pts[idx])


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    """Hull of all pairwise vertex sums."""
    if p.dim_ambient != q.dim_ambient:
        raise GeometryError(
            f"dimension mismatch in Minkowski sum: {p.dim_ambient} vs {q.dim_ambient}")
    sums = (p.vertices[:, None, :] + q.vertices[None, :, :]).reshape(-1, p.dim_ambient)
    return convex_hull(sums)


def scale(p: Polytope, lam: float) -> Polytope:
    if lam < 0:
        raise GeometryError(f"scale factor must be nonnegative, got {lam}")
    if lam == 0:
        return Polytope(np.zeros((1, p.dim_ambient)))
    return Polytope(p.vertices * float(lam))


def translate(p: Polytope, shift) -> Polytope:
    shift = np.asarray(shift, dtype=float)
    if shift.shape != (p.dim_ambient,):
        raise GeometryError("translation vector has the wrong dimension")
    return Polytope(p.vertices + shift)


def linear_image(p: Polytope, matrix) -> Polytope:
    """Image ``{M x : x in P}`` of a polytope under a linear map."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[1] != p.dim_ambient:
        raise GeometryError(
            f"matrix of shape {m.shape} cannot act on dimension {p.dim_ambient}")
    return convex_hull(p.vertices @ m.T)


def embed(p: Polytope, d: int) -> Polytope:
    """Isometric embedding into ``R^d`` by zero-padding trailing coordinates."""
    if d < p.dim_ambient:
        raise GeometryError(f"cannot embed dimension {p.dim_ambient} into {d}")
    if d == p.dim_ambient:
        return p
    pad = np.zeros((p.n_vertices, d - p.dim_ambient))
    return Polytope(np.hstack([p.vertices, pad]))


def volume(p: Polytope) -> float:
    """Lebesgue measure of ``p`` in its ambient dimension.

    Lower-dimensional polytopes have volume 0. In dimension three and up
    the boundary triangulation is coned from the vertex centroid and the
    simplex volumes ``|det| / d!`` are summed.
    """
    d = p.dim_ambient
    if d > MAX_DIM:
        raise GeometryError(f"dimension {d} exceeds the supported maximum {MAX_DIM}")
    if p.dim_affine < d:
        return 0.0
    v = p.vertices
    if d == 1:
        return float(v[:, 0].max() - v[:, 0].min())
    if d == 2:
        idx = np.arange(v.shape[0])
        return float(_kernels.polygon_area(np.ascontiguousarray(v[:, 0]),
                                           np.ascontiguousarray(v[:, 1]), idx))
    c = v.mean(axis=0)
    hull = ConvexHull(v - c)
    cones = hull.points[hull.simplices]
    dets = np.abs(np.linalg.det(cones))
    return float(math.fsum(dets) / math.factorial(d))


def perimeter(p: Polytope) -> float:
    """Boundary length of a planar polytope (twice the length for a segment)."""
    if p.dim_ambient != 2:
        raise GeometryError("perimeter is defined for planar polytopes only")
    v = p.vertices
    if v.shape[0] == 1:
        return 0.0
    if p.dim_affine == 1:
        return 2.0 * float(np.linalg.norm(v[1] - v[0]))
    return float(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1).sum())


def box(sides) -> Polytope:
    """Axis-parallel box ``[0, a_1] x ... x [0, a_d]``."""
    sides = np.asarray(sides, dtype=float)
    corners = np.array(list(itertools.product([0.0, 1.0], repeat=sides.size)))
    return convex_hull(corners * sides)


def segment(a, b) -> Polytope:
    return convex_hull(np.array([a, b], dtype=float))


def _icosphere(freq: int) -> np.ndarray:
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    base = np.array([
        [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
        [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
        [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
    ], dtype=float)
    base /= np.linalg.norm(base, axis=1, keepdims=True)
    faces = ConvexHull(base).simplices
    pts = []
    for a, b, c in faces:
        for i in range(freq + 1):
            for j in range(freq + 1 - i):
                pts.append((i * base[a] + j * base[b] + (freq - i - j) * base[c]) / freq)
    pts = np.array(pts)
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    _, keep = np.unique(np.round(pts, 10), axis=0, return_index=True)
    return pts[np.sort(keep)]


def _cubed_sphere(d: int, grid: int) -> np.ndarray:
    ticks = np.linspace(-1.0, 1.0, grid + 1)
    pts = np.array(list(itertools.product(ticks, repeat=d)))
    pts = pts[np.abs(pts).max(axis=1) == 1.0]
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def ball_polytope(d: int, n: int, mode: str = "inscribed") -> Polytope:
    """Polytopal surrogate of the unit ball ``B^d``.

    Parameters
    ----------
    d : int
        1, 2, 3 or 4.
    n : int
        Resolution. In the plane, the exact number of vertices of a regular
        polygon. In dimension 3 and 4, a lower bound on the vertex count of a
        geodesic icosphere of even frequency (``d = 3``) or a cubed sphere
        (``d = 4``). Both contain the points ``+-e_i``.
    mode : {"inscribed", "circumscribed"}
        Inscribed surrogates have all vertices on the unit sphere;
        circumscribed ones are rescaled so that every facet is at distance
        at least 1 from the origin.
    """
    if mode not in ("inscribed", "circumscribed"):
        raise GeometryError(f"unknown ball mode {mode!r}")
    if d not in (1, 2, 3, 4):
        raise GeometryError(f"ball surrogates are available for d in 1..4, got {d}")
    if n < d + 1:
        raise GeometryError(f"resolution n={n} is below the minimum {d + 1}")
    if d == 1:
        return convex_hull(np.array([[-1.0], [1.0]]))
    if d == 2:
        t = 2.0 * np.pi * np.arange(n) / n
        r = 1.0 if mode == "inscribed" else 1.0 / math.cos(math.pi / n)
        return convex_hull(r * np.column_stack([np.cos(t), np.sin(t)]))
    if d == 3:
        # even frequencies put vertices on the coordinate axes
        freq = 2
        while 10 * freq * freq + 2 < n:
            freq += 2
        pts = _icosphere(freq)
    else:
        grid = 2
        while (grid + 1) ** d - (grid - 1) ** d < n:
            grid += 2
        pts = _cubed_sphere(d, grid)
    if mode == "circumscribed":
        offsets = ConvexHull(pts).equations[:, -1]
        pts = pts / float(np.min(-offsets))
    return convex_hull(pts)
