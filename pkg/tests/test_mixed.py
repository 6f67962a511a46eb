import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaussmix.convex import (ball_polytope, box, convex_hull, embed, linear_image,
                             minkowski_sum, perimeter, scale, segment, translate, volume)
from gaussmix.exceptions import GeometryError, NumericalError
from gaussmix.mixed import (MixedVolumeResult, extrapolate_ball_limit, intrinsic_volume_box,
                            kappa, mean_support, mixed_volume_bracket,
                            mixed_volume_interpolation, mixed_volume_polarization,
                            normalized_mixed_volume, steiner_fit)

from conftest import random_hull, random_rotation, seeds

R1 = box((1.0, 2.0))
R2 = box((3.0, 4.0))
SQ = box((1.0, 1.0))


def test_kappa():
    assert kappa(0) == 1.0
    assert kappa(1) == pytest.approx(2.0)
    assert kappa(2) == pytest.approx(math.pi)
    assert kappa(3) == pytest.approx(4.0 * math.pi / 3.0)
    with pytest.raises(GeometryError):
        kappa(-1)


def test_polarization_examples():
    # (Vol(K1+K2) - Vol K1 - Vol K2) / 2 with the areas 24, 2, 12
    assert volume(minkowski_sum(R1, R2)) == pytest.approx(24.0)
    assert mixed_volume_polarization([R1, R2]) == pytest.approx(5.0, rel=1e-14)
    assert mixed_volume_polarization([SQ, SQ]) == pytest.approx(1.0, rel=1e-14)
    e1, e2 = segment((0, 0), (1, 0)), segment((0, 0), (0, 1))
    assert mixed_volume_polarization([e1, e2]) == pytest.approx(0.5, rel=1e-14)


def test_polarization_boxes_3d():
    # V(A, B, C) for boxes is the permanent-style average of side products
    a, b, c = (1.0, 2.0, 3.0), (2.0, 1.0, 1.0), (0.5, 4.0, 1.0)
    exact = sum(a[p[0]] * b[p[1]] * c[p[2]] for p in itertools.permutations(range(3))) / 6
    assert mixed_volume_polarization([box(a), box(b), box(c)]) == pytest.approx(exact, rel=1e-12)


def test_polarization_errors():
    with pytest.raises(GeometryError):
        mixed_volume_polarization([R1])
    with pytest.raises(GeometryError):
        mixed_volume_polarization([R1, box((1.0, 1.0, 1.0))])
    five = [box(np.ones(5))] * 5
    with pytest.raises(GeometryError):
        mixed_volume_polarization(five)


def test_interpolation_examples():
    assert mixed_volume_interpolation([R1, R2]) == pytest.approx(5.0, rel=1e-10)
    v1 = mixed_volume_interpolation([SQ], 2, n_ball=256)
    # V(K, B) = kappa_1 V_1(K) / C(2, 1) = V_1(K) in the plane
    assert v1 == pytest.approx(2.0, abs=1e-3)
    assert mixed_volume_interpolation([SQ, SQ]) == pytest.approx(
        mixed_volume_polarization([SQ, SQ]), rel=1e-10)


def test_interpolation_grid_errors():
    with pytest.raises(GeometryError):
        mixed_volume_interpolation([R1, R2], alphas=[1.0, 2.0])
    with pytest.raises(GeometryError):
        mixed_volume_interpolation([SQ], 2, lambdas=[0.5, 1.0])
    with pytest.raises(GeometryError):
        mixed_volume_interpolation([SQ], 2, alphas=[-1.0, 1.0, 2.0])
    with pytest.raises(GeometryError):
        mixed_volume_interpolation([R1, R2, R1], 2)
    with pytest.raises(GeometryError):
        mixed_volume_interpolation([box(np.ones(5))], 5)


def test_interpolation_detects_bad_fit():
    # nearly coincident nodes make the fit useless; the residual check trips
    nodes = 1.0 + 1e-9 * np.arange(3)
    with pytest.raises(NumericalError):
        mixed_volume_interpolation([R1, random_hull(3, 2)], alphas=nodes)


def test_interpolation_with_explicit_ball_matches_polarization():
    ball = ball_polytope(2, 64)
    for seed in range(5):
        k = random_hull(seed, 2)
        a = mixed_volume_interpolation([k], 2, ball=ball)
        b = mixed_volume_polarization([k, ball])
        assert a == pytest.approx(b, rel=1e-6)
    ball3 = ball_polytope(3, 16)
    k = random_hull(7, 3)
    assert mixed_volume_interpolation([k], 3, ball=ball3) == pytest.approx(
        mixed_volume_polarization([k, ball3, ball3]), rel=1e-6)


def test_steiner_square():
    fit = steiner_fit(SQ, n_ball=512)
    v = fit.intrinsic_volumes()
    assert v == pytest.approx((1.0, 2.0, 1.0), abs=1e-2)
    # 1 + 4 lam + pi lam^2
    assert fit.coeffs[1:] == pytest.approx((4.0, 1.0), abs=1e-9)
    assert fit.coeffs[0] == pytest.approx(math.pi, abs=1e-3)


def test_steiner_degenerate_bodies():
    fit = steiner_fit(segment((0, 0), (1.5, 0)))
    assert fit.intrinsic_volumes() == pytest.approx((1.0, 1.5, 0.0), abs=1e-3)
    fit = steiner_fit(convex_hull([(0.3, -0.2)]))
    v = fit.intrinsic_volumes()
    assert v[0] == pytest.approx(1.0, abs=1e-3)
    assert v[1:] == pytest.approx((0.0, 0.0), abs=1e-9)
    assert all(c >= 0 for c in fit.coeffs)


def test_steiner_cube():
    v = steiner_fit(box((1.0, 2.0, 3.0)), n_ball=400).intrinsic_volumes()
    exact = [intrinsic_volume_box((1.0, 2.0, 3.0), k) for k in range(4)]
    assert v[2:] == pytest.approx(exact[2:], rel=1e-9)
    assert v[:2] == pytest.approx(exact[:2], rel=2e-2)


def test_steiner_errors():
    with pytest.raises(GeometryError):
        steiner_fit(SQ, lambdas=[0.5, 1.0])
    with pytest.raises(GeometryError):
        steiner_fit(box(np.ones(4)))


def test_intrinsic_volume_box():
    assert intrinsic_volume_box((1, 1), 1) == 2.0
    assert intrinsic_volume_box((2.0, 3.0, 5.0), 3) == 30.0
    assert intrinsic_volume_box((2, 3), 0) == 1.0
    with pytest.raises(GeometryError):
        intrinsic_volume_box((1, 1), 3)


def test_normalized_examples():
    assert normalized_mixed_volume([R1, R2], 2) == pytest.approx(5.0, rel=1e-10)
    lo = normalized_mixed_volume([R1, R2], 3, mode="inscribed")
    hi = normalized_mixed_volume([R1, R2], 3, mode="circumscribed")
    assert lo <= 5.0 <= hi
    assert lo == pytest.approx(5.0, abs=2e-2)
    assert hi == pytest.approx(5.0, abs=5e-2)
    seg = segment((0.0,), (1.7,))
    for d in (1, 2, 3):
        assert normalized_mixed_volume([seg], d) == pytest.approx(1.7, rel=2e-2)
    assert normalized_mixed_volume([seg], 1) == pytest.approx(1.7, rel=1e-12)


def test_result_json():
    r = MixedVolumeResult(5.0, "polarization")
    assert json.loads(r.to_json()) == {"value": 5.0, "bracket": [5.0, 5.0],
                                       "method": "polarization", "residual": 0.0}
    lo, hi = mixed_volume_bracket([SQ], 2, 64)
    r = MixedVolumeResult(lo, "interpolation", (lo, hi), 1e-15)
    assert r.to_dict()["bracket"] == [lo, hi]


def test_mean_support():
    assert mean_support(ball_polytope(2, 4)) == pytest.approx(4 * math.sqrt(2) / (2 * math.pi))
    sq = box((1.0, 1.0))
    assert mean_support(sq) == pytest.approx(perimeter(sq) / (2 * math.pi))
    # mean half-width of the unit cube is 3/4
    cube = translate(box((1.0, 1.0, 1.0)), (-0.5, -0.5, -0.5))
    assert mean_support(cube) == pytest.approx(0.75, rel=1e-4)


def test_ball_limit_against_closed_forms():
    k = random_hull(4, 2)
    assert extrapolate_ball_limit([k], 2) == pytest.approx(perimeter(k) / 2, rel=1e-5)
    cube = box((1.0, 1.0, 1.0))
    # V(C, C, B) = S / 3 and V(C, B, B) = pi V_1 / 3
    assert extrapolate_ball_limit([cube, cube], 3) == pytest.approx(2.0, rel=2e-3)
    assert extrapolate_ball_limit([cube], 3) == pytest.approx(math.pi, rel=2e-3)


# properties


@given(seeds, st.integers(2, 3))
def test_polarization_symmetry(seed, d):
    bodies = [random_hull(seed + i, d, n_max=8) for i in range(d)]
    base = mixed_volume_polarization(bodies)
    for perm in itertools.permutations(bodies):
        assert mixed_volume_polarization(perm) == pytest.approx(base, rel=1e-12, abs=1e-15)


@given(seeds, st.integers(2, 3), st.floats(0.0, 3.0), st.floats(0.0, 3.0))
def test_multilinearity(seed, d, lam, mu):
    k1, k1b, *rest = [random_hull(seed + i, d, n_max=7) for i in range(d + 1)]
    combo = minkowski_sum(scale(k1, lam), scale(k1b, mu))
    lhs = mixed_volume_polarization([combo, *rest])
    rhs = lam * mixed_volume_polarization([k1, *rest]) + mu * mixed_volume_polarization([k1b, *rest])
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)


@given(seeds, st.integers(2, 3))
def test_translation_invariance(seed, d):
    bodies = [random_hull(seed + i, d, n_max=8) for i in range(d)]
    shifts = np.random.default_rng(seed).uniform(-5, 5, (d, d))
    moved = [translate(b, s) for b, s in zip(bodies, shifts)]
    assert mixed_volume_polarization(moved) == pytest.approx(
        mixed_volume_polarization(bodies), rel=1e-9)


@given(seeds, st.integers(2, 3))
def test_monotone_under_inclusion(seed, d):
    rng = np.random.default_rng(seed)
    bodies = [random_hull(seed + i, d, n_max=8) for i in range(d)]
    big = bodies[0]
    w = rng.dirichlet(np.ones(big.n_vertices), size=d + 3)
    small = convex_hull(w @ big.vertices)
    assert (mixed_volume_polarization([small, *bodies[1:]])
            <= mixed_volume_polarization(bodies) * (1 + 1e-12) + 1e-15)


@given(seeds, st.integers(2, 3))
def test_rotation_invariance(seed, d):
    q = random_rotation(seed, d)
    bodies = [random_hull(seed + i, d, n_max=8) for i in range(d)]
    rotated = [linear_image(b, q) for b in bodies]
    assert mixed_volume_polarization(rotated) == pytest.approx(
        mixed_volume_polarization(bodies), rel=1e-9)


@given(seeds, st.integers(2, 3))
def test_nonnegative(seed, d):
    rng = np.random.default_rng(seed)
    bodies = []
    for i in range(d):
        # include lower-dimensional pieces to exercise cancellation
        n = int(rng.integers(1, d + 3))
        bodies.append(convex_hull(rng.uniform(-1, 1, (n, d))))
    assert mixed_volume_polarization(bodies) >= 0.0
    assert mixed_volume_interpolation(bodies) >= 0.0


@given(seeds, st.integers(2, 3))
def test_route_agreement(seed, d):
    bodies = [random_hull(seed + i, d, n_max=8) for i in range(d)]
    a = mixed_volume_polarization(bodies)
    b = mixed_volume_interpolation(bodies)
    assert b == pytest.approx(a, rel=1e-6)


@given(seeds, st.integers(1, 4))
def test_diagonal_collapse(seed, d):
    k = random_hull(seed, d, n_max=8 if d < 4 else 6)
    assert mixed_volume_polarization([k] * d) == pytest.approx(volume(k), rel=1e-10)


@pytest.mark.parametrize("d,k", [(2, 1), (3, 1), (3, 2)])
def test_ball_bracketing(d, k):
    for seed in range(3):
        bodies = [random_hull(seed + i, d) for i in range(k)]
        widths = []
        for n in (16, 64, 256):
            lo, hi = mixed_volume_bracket(bodies, d, n)
            assert lo <= hi
            widths.append(hi - lo)
        assert widths[0] > widths[1] > widths[2]


def test_embedding_is_dimension_free():
    # embedding a planar pair into R^3 and R^4 keeps the normalized value
    e = [normalized_mixed_volume([embed(R1, d), embed(R2, d)], d) for d in (3, 4)]
    assert e[0] == pytest.approx(5.0, abs=2e-2)
    lo, hi = (normalized_mixed_volume([R1, R2], 4, n_ball=30, mode=m)
              for m in ("inscribed", "circumscribed"))
    assert lo <= 5.0 <= hi
