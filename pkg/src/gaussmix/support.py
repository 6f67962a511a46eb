"""Support functions of planar polytopes and Cauchy-formula quadrature.

For a planar convex body with support function ``M(phi)``:

    length     L = int_0^{2pi} M dphi
    area       A = 1/2 int_0^{2pi} (M^2 - M'^2) dphi
    mixed area V(F1, F2) = 1/2 int_0^{2pi} (M1 M2 - M1' M2') dphi

All integrals use the periodic trapezoid rule on a uniform grid. ``M'`` is
a periodic central difference. Polygonal support functions have kinks at
the edge normals, so the area quadratures converge at O(1/m) only.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .convex import Polytope
from .exceptions import GeometryError

__all__ = [
    "SupportProfile",
    "support_profile",
    "cauchy_length",
    "cauchy_area",
    "cauchy_mixed_area",
]


@dataclass(frozen=True, eq=False)
class SupportProfile:
    angles: np.ndarray
    values: np.ndarray
    source: Polytope | None = None

    @property
    def m(self) -> int:
        return self.angles.size

    @property
    def step(self) -> float:
        return 2.0 * np.pi / self.m

    def derivative(self) -> np.ndarray:
        return (np.roll(self.values, -1) - np.roll(self.values, 1)) / (2.0 * self.step)

    def __add__(self, other: "SupportProfile") -> "SupportProfile":
        _check_grids(self, other)
        return SupportProfile(self.angles, self.values + other.values)

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        buf.write("angle,value\n")
        for a, v in zip(self.angles, self.values):
            buf.write(f"{a:.17g},{v:.17g}\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _check_grids(p1: SupportProfile, p2: SupportProfile):
    if p1.m != p2.m or not np.array_equal(p1.angles, p2.angles):
        raise GeometryError("support profiles live on different angle grids")


def support_profile(body: Polytope, m: int = 4096) -> SupportProfile:
    """``M(phi_j) = max_v <v, (cos phi_j, sin phi_j)>`` on ``phi_j = 2 pi j / m``."""
    if body.dim_ambient != 2:
        raise GeometryError("support profiles are defined for planar bodies only")
    if m < 8:
        raise GeometryError(f"grid size m must be at least 8, got {m}")
    angles = 2.0 * np.pi * np.arange(m) / m
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    values = (dirs @ body.vertices.T).max(axis=1)
    return SupportProfile(angles, values, body)


def cauchy_length(profile: SupportProfile) -> float:
    return float(profile.values.sum() * profile.step)


def cauchy_area(profile: SupportProfile) -> float:
    if profile.m < 32:
        raise GeometryError(f"grid size m must be at least 32, got {profile.m}")
    dm = profile.derivative()
    return float(0.5 * np.sum(profile.values ** 2 - dm ** 2) * profile.step)


def cauchy_mixed_area(p1: SupportProfile, p2: SupportProfile) -> float:
    _check_grids(p1, p2)
    integrand = p1.values * p2.values - p1.derivative() * p2.derivative()
    return float(0.5 * np.sum(integrand) * p1.step)
