import math

import numpy as np
import pytest
from hypothesis import given, settings

from gaussmix import _kernels
from gaussmix.brownian import (estimate_spiral_intrinsic, estimate_two_spirals_mixed,
                               factorized_mixed_area, hull_of_path, max_stats,
                               max_stats_samples, path_from_increments, refine_path,
                               sample_brownian_path, simulate_paths, spiral_intrinsic_target,
                               spiral_pair_samples)
from gaussmix.convex import perimeter, volume
from gaussmix.exceptions import GeometryError
from gaussmix.montecarlo import RngStream, aggregate

from conftest import seeds


def test_endpoint_moments():
    x1 = simulate_paths(RngStream(42).generator(), 10 ** 6, 1, 2)[:, 0, -1]
    assert abs(x1.mean()) < 4.0 / math.sqrt(x1.size)
    assert x1.var() == pytest.approx(1.0, rel=1e-2)


def test_increment_moments():
    path = sample_brownian_path(2, 100_000, RngStream(3))
    inc = np.diff(path.values, axis=0)
    dt = 1.0 / 100_000
    assert inc.var(axis=0) == pytest.approx([dt, dt], rel=2e-2)
    # disjoint increments are uncorrelated, and so are the two coordinates
    assert abs(np.corrcoef(inc[:-1, 0], inc[1:, 0])[0, 1]) < 4 / math.sqrt(inc.shape[0])
    assert abs(np.corrcoef(inc[:, 0], inc[:, 1])[0, 1]) < 4 / math.sqrt(inc.shape[0])


def test_path_shape_and_determinism():
    a = sample_brownian_path(3, 50, RngStream(7, 2))
    b = sample_brownian_path(3, 50, RngStream(7, 2))
    assert a.values.shape == (51, 3)
    assert np.all(a.values[0] == 0.0)
    assert np.array_equal(a.values, b.values)
    assert a.times[0] == 0.0 and a.times[-1] == 1.0
    with pytest.raises(GeometryError):
        sample_brownian_path(4, 50, RngStream(1))
    with pytest.raises(GeometryError):
        sample_brownian_path(2, 1, RngStream(1))


def test_hull_of_path_examples():
    flat = path_from_increments(np.zeros((10, 2)))
    assert hull_of_path(flat).n_vertices == 1
    path = sample_brownian_path(2, 1000, RngStream(5))
    hull = hull_of_path(path)
    assert hull.n_vertices < 1001
    # origin is inside: every support value is nonnegative
    t = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    support = (np.column_stack([np.cos(t), np.sin(t)]) @ hull.vertices.T).max(axis=1)
    assert np.all(support >= 0.0)


def test_kernel_matches_generic_hull():
    paths = simulate_paths(RngStream(8).generator(), 5, 2, 2000)
    fast = _kernels.batch_hull_area(paths, _kernels.HULL_EPS)
    slow = [volume(hull_of_path(path_from_increments(np.diff(p.T, axis=0)))) for p in paths]
    assert fast == pytest.approx(slow, rel=1e-12)


def test_max_stats_tie_break_and_errors():
    inc = np.array([[1.0, 0.5], [-1.0, 0.5], [1.0, 0.5], [-2.0, 0.0]])
    s = max_stats(path_from_increments(inc))
    assert s.m == 1.0
    assert s.t_star == pytest.approx(0.25)
    assert s.h_at_tstar == 0.5
    with pytest.raises(GeometryError):
        max_stats(sample_brownian_path(3, 10, RngStream(1)))


def test_max_stats_vectorized_matches_scalar():
    m, h, t = max_stats_samples(200, 64, 4)
    gen = RngStream(4).named("bm-max").substream(0).generator()
    paths = simulate_paths(gen, 64, 2, 200)
    for i in (0, 17, 63):
        s = max_stats(path_from_increments(np.diff(paths[i].T, axis=0)))
        assert (s.m, s.h_at_tstar) == pytest.approx((m[i], h[i]), rel=1e-12)
        assert s.t_star == pytest.approx(t[i])


@pytest.mark.slow
def test_max_stats_targets(full_pairs):
    m = aggregate(full_pairs.m)
    h = aggregate(full_pairs.h)
    assert abs(m.mean - math.sqrt(2 / math.pi)) <= 3 * m.stderr + 2e-2
    assert abs(h.mean) <= 3 * h.stderr
    p = float(np.mean(full_pairs.m <= 1.0))
    se = math.sqrt(p * (1 - p) / full_pairs.m.size)
    assert abs(p - math.erf(1 / math.sqrt(2))) <= 3 * se + 1e-2
    assert np.all(full_pairs.m >= 0.0)


def test_spiral_targets():
    assert spiral_intrinsic_target(1) == pytest.approx(2.0)
    assert spiral_intrinsic_target(2) == pytest.approx(math.pi / 2)


def test_coarse_discretization_is_below_target():
    est = estimate_spiral_intrinsic(2, 2, 20_000, 42)
    assert est.ci95[1] < math.pi / 2
    est = estimate_spiral_intrinsic(1, 2, 20_000, 42)
    assert est.ci95[1] < 2.0


def test_spiral_errors():
    with pytest.raises(GeometryError):
        estimate_spiral_intrinsic(3, 100, 1000)
    with pytest.raises(GeometryError):
        estimate_two_spirals_mixed(100, 999)


def test_duplicate_pair_gives_the_area():
    dup = spiral_pair_samples(1000, 5000, 42, duplicate=True)
    assert dup.mixed == pytest.approx(dup.area1, rel=1e-9)
    a = aggregate(dup.mixed)
    b = estimate_spiral_intrinsic(2, 1000, 5000, 42)
    assert abs(a.mean - b.mean) <= 3 * math.hypot(a.stderr, b.stderr)


def test_two_spirals_estimate_is_the_pair_mean():
    est = estimate_two_spirals_mixed(500, 1000, 9)
    pairs = spiral_pair_samples(500, 1000, 9)
    assert est.mean == pytest.approx(float(pairs.mixed.mean()), rel=1e-12)


def test_factorized_value_and_error():
    rng = np.random.default_rng(0)
    m = np.abs(rng.standard_normal(50_000))
    h = rng.standard_normal(50_000)
    est = factorized_mixed_area(m, h)
    assert est.mean == pytest.approx(math.pi * (m.mean() ** 2 - h.mean() ** 2))
    # delta-method error against replication
    reps = [factorized_mixed_area(np.abs(r.standard_normal(2000)), r.standard_normal(2000)).mean
            for r in (np.random.default_rng(s) for s in range(200))]
    small = factorized_mixed_area(m[:2000], h[:2000])
    assert small.stderr == pytest.approx(np.std(reps), rel=0.25)


# properties


def test_scaling_self_similarity():
    n, steps = 20_000, 500
    a = _kernels.batch_hull_area(simulate_paths(RngStream(1).generator(), n, 2, steps),
                                 _kernels.HULL_EPS)
    b = _kernels.batch_hull_area(simulate_paths(RngStream(2).generator(), n, 2, steps, 4.0),
                                 _kernels.HULL_EPS)
    ea, eb = aggregate(a), aggregate(b)
    assert abs(eb.mean - 4 * ea.mean) <= 3 * math.hypot(eb.stderr, 4 * ea.stderr)


@pytest.mark.slow
def test_pair_areas_independent(full_pairs):
    n = full_pairs.area1.size
    r = np.corrcoef(full_pairs.area1, full_pairs.area2)[0, 1]
    assert abs(r) < 4 / math.sqrt(n)


def test_rotation_invariance_of_area():
    n, steps, phi = 20_000, 500, 0.7
    rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    p = simulate_paths(RngStream(1).generator(), n, 2, steps)
    q = simulate_paths(RngStream(2).generator(), n, 2, steps)
    q_rot = np.ascontiguousarray(np.einsum("ij,bjn->bin", rot, q))
    area_p = _kernels.batch_hull_area(p, _kernels.HULL_EPS)
    area_q = _kernels.batch_hull_area(q, _kernels.HULL_EPS)
    area_rot = _kernels.batch_hull_area(q_rot, _kernels.HULL_EPS)
    # pathwise, rotation is an isometry
    assert area_rot == pytest.approx(area_q, rel=1e-9)
    a, b = aggregate(area_p), aggregate(area_rot)
    assert abs(a.mean - b.mean) <= 3 * math.hypot(a.stderr, b.stderr)


@settings(max_examples=15)
@given(seeds)
def test_refinement_monotone(seed):
    path = sample_brownian_path(2, 64, RngStream(seed % 2**63))
    areas, perims = [], []
    for level in range(4):
        hull = hull_of_path(path)
        areas.append(volume(hull))
        perims.append(perimeter(hull))
        refined = refine_path(path, RngStream(seed % 2**63, level + 1))
        assert np.array_equal(refined.values[0::2], path.values)
        path = refined
    assert all(b >= a for a, b in zip(areas, areas[1:]))
    assert all(b >= a for a, b in zip(perims, perims[1:]))
