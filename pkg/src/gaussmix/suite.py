"""Reproduction suite: the acceptance criteria as runnable checks.

Every criterion returns a :class:`CriterionResult` with one entry per
individual comparison. ``run_suite`` is what ``gaussmix reproduce`` prints;
the test-suite runs the same functions at full scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .brownian import (estimate_spiral_intrinsic, factorized_mixed_area, spiral_intrinsic_target,
                       spiral_pair_samples)
from .convex import box, convex_hull, embed, segment, volume, perimeter
from .mixed import (extrapolate_ball_limit, mixed_volume_bracket, mixed_volume_interpolation,
                    mixed_volume_polarization, normalized_mixed_volume, steiner_fit)
from .montecarlo import Z95, aggregate
from .spectrum import estimate_intrinsic_volume, estimate_mixed_volume
from .support import cauchy_area, cauchy_length, cauchy_mixed_area, support_profile

RECT_A = (1.0, 2.0)
RECT_B = (3.0, 4.0)
RECT_MIXED = 5.0

__all__ = ["SuiteConfig", "CriterionResult", "CRITERIA", "run_suite", "random_polytope"]


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 42
    workers: int = 1
    n_steps: int = 10_000
    n_paths: int = 100_000
    n_samples: int = 100_000
    spiral_mixed_allowance: float = 0.04
    spiral_intrinsic_allowance: float = 0.03
    bm_max_allowance: float = 0.02
    factorization_allowance: float = 0.05
    dimension_allowance: float = 0.02
    n_pairs_2d: int = 50
    n_triples_3d: int = 20
    n_hulls: int = 100
    cauchy_grids: tuple = (512, 1024, 2048, 4096)
    bracket_ns: tuple = (16, 64, 256)
    quick: bool = False

    @classmethod
    def quick_mode(cls, seed: int = 42, workers: int = 1) -> "SuiteConfig":
        # coarse paths are biased low by roughly 0.58/sqrt(n_steps) per maximum
        return cls(seed=seed, workers=workers, n_steps=1000, n_paths=2000, n_samples=5000,
                   spiral_mixed_allowance=0.15, spiral_intrinsic_allowance=0.1,
                   bm_max_allowance=0.05, factorization_allowance=0.2,
                   dimension_allowance=0.05, n_pairs_2d=10, n_triples_3d=3, n_hulls=20,
                   bracket_ns=(16, 64),
                   quick=True)


@dataclass
class CriterionResult:
    number: int
    name: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def check(self, label: str, value: float, target: float, tolerance: float, **extra) -> bool:
        ok = bool(abs(value - target) <= tolerance)
        self.checks.append({"label": label, "value": float(value), "target": float(target),
                            "tolerance": float(tolerance), "pass": ok, **extra})
        return ok

    def assert_true(self, label: str, ok: bool, **extra) -> bool:
        self.checks.append({"label": label, "pass": bool(ok), **extra})
        return bool(ok)

    def to_dict(self) -> dict:
        return {"criterion": self.number, "name": self.name, "pass": self.passed,
                "checks": self.checks}

    def summary(self) -> str:
        return f"C{self.number} {self.name}: {'PASS' if self.passed else 'FAIL'}"


def random_polytope(rng: np.random.Generator, d: int, n_min: int = 4, n_max: int = 10):
    """Hull of a few uniform points in ``[-1, 1]^d`` shifted by a random offset."""
    n = int(rng.integers(max(n_min, d + 1), n_max + 1))
    pts = rng.uniform(-1.0, 1.0, (n, d)) + rng.uniform(-2.0, 2.0, d)
    return convex_hull(pts)


def random_planar_hull(rng: np.random.Generator):
    """Hull of 10 to 50 uniform points in the unit square."""
    return convex_hull(rng.random((int(rng.integers(10, 51)), 2)))


class _Cache(dict):
    def pairs(self, cfg: SuiteConfig):
        if "pairs" not in self:
            self["pairs"] = spiral_pair_samples(cfg.n_steps, cfg.n_paths, cfg.seed, cfg.workers)
        return self["pairs"]


def _band(est, allowance=0.0):
    return Z95 * est.stderr + allowance


def spiral_mixed(cfg: SuiteConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(1, "wiener_spiral_mixed_volume")
    est = aggregate(cache.pairs(cfg).mixed, cfg.seed)
    res.check("mixed area of two Brownian hulls", est.mean, 2.0,
              _band(est, cfg.spiral_mixed_allowance), stderr=est.stderr)
    return res


def gao_vitale(cfg: SuiteConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(2, "wiener_spiral_intrinsic_volumes")
    for k in (1, 2):
        est = estimate_spiral_intrinsic(k, cfg.n_steps, cfg.n_paths, cfg.seed, cfg.workers)
        res.check(f"V_{k}", est.mean, spiral_intrinsic_target(k),
                  _band(est, cfg.spiral_intrinsic_allowance), stderr=est.stderr)
    return res


def bm_max(cfg: SuiteConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(3, "brownian_max_statistics")
    s = cache.pairs(cfg)
    m = aggregate(s.m, cfg.seed)
    h = aggregate(s.h, cfg.seed)
    res.check("E max W1", m.mean, math.sqrt(2.0 / math.pi), _band(m, cfg.bm_max_allowance),
              stderr=m.stderr)
    res.check("E W2(t*)", h.mean, 0.0, _band(h), stderr=h.stderr)
    return res


def factorization(cfg: SuiteConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(4, "mixed_area_factorization")
    s = cache.pairs(cfg)
    direct = aggregate(s.mixed, cfg.seed)
    fact = factorized_mixed_area(s.m, s.h, cfg.seed)
    tol = 3.0 * math.hypot(direct.stderr, fact.stderr) + cfg.factorization_allowance
    res.check("direct vs pi((E m)^2 - (E h)^2)", direct.mean, fact.mean, tol,
              stderr=direct.stderr, stderr_target=fact.stderr)
    return res


def finite_tsirelson(cfg: SuiteConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(5, "finite_dimensional_tsirelson")
    r1, r2 = box(RECT_A), box(RECT_B)
    est = estimate_mixed_volume([r1, r2], cfg.n_samples, cfg.seed, cfg.workers)
    res.check("mixed volume of rectangles", est.mean, RECT_MIXED, _band(est), stderr=est.stderr)
    est = estimate_intrinsic_volume(box((1.0, 1.0)), 2, cfg.n_samples, cfg.seed, cfg.workers)
    res.check("V_2 of unit square", est.mean, 1.0, _band(est), stderr=est.stderr)
    for d in (1, 2, 3, 4):
        seg = segment(np.zeros(d), np.eye(d)[0])
        est = estimate_intrinsic_volume(seg, 1, cfg.n_samples, cfg.seed, cfg.workers)
        res.check(f"V_1 of unit segment in R^{d}", est.mean, 1.0, _band(est), stderr=est.stderr)
    return res


def dimension_invariance(cfg: SuiteConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(6, "dimension_invariance")
    r1, r2 = box(RECT_A), box(RECT_B)
    exact = normalized_mixed_volume([r1, r2], 2)
    for d in (3, 4):
        est = estimate_mixed_volume([embed(r1, d), embed(r2, d)], cfg.n_samples, cfg.seed,
                                    cfg.workers)
        res.check(f"exact d=2 vs spectral d={d}", est.mean, exact,
                  _band(est, cfg.dimension_allowance), stderr=est.stderr)
    return res


def exact_routes(cfg: SuiteConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(7, "exact_route_cross_check")
    rng = np.random.default_rng(cfg.seed)
    worst = {2: 0.0, 3: 0.0}
    for d, count in ((2, cfg.n_pairs_2d), (3, cfg.n_triples_3d)):
        for _ in range(count):
            bodies = [random_polytope(rng, d) for _ in range(d)]
            a = mixed_volume_polarization(bodies)
            b = mixed_volume_interpolation(bodies)
            worst[d] = max(worst[d], abs(a - b) / max(abs(a), 1e-300))
        res.check(f"polarization vs interpolation, d={d}, max relative gap", worst[d], 0.0, 1e-6,
                  count=count)

    v = steiner_fit(box((1.0, 1.0)), n_ball=512).intrinsic_volumes()
    for k, target in enumerate((1.0, 2.0, 1.0)):
        res.check(f"Steiner fit of unit square, V_{k}", v[k], target, 1e-2)

    cube = box((1.0, 1.0, 1.0))
    queries = [("unit square", [box((1.0, 1.0))], 2),
               ("unit segment", [segment((0.0, 0.0), (1.0, 0.0))], 2),
               ("unit cube, one ball slot", [cube, cube], 3),
               ("unit cube, two ball slots", [cube], 3)]
    queries += [(f"random polygon {i}", [random_polytope(rng, 2)], 2) for i in range(3)]
    queries += [("random 3-polytope", [random_polytope(rng, 3)] * 2, 3)]
    for label, bodies, d in queries:
        best = extrapolate_ball_limit(bodies, d, n_ball=4 * cfg.bracket_ns[-1])
        inside = True
        for n in cfg.bracket_ns:
            lo, hi = mixed_volume_bracket(bodies, d, n)
            slack = 1e-12 * max(abs(hi), 1.0)
            inside &= lo - slack <= best <= hi + slack
        res.assert_true(f"brackets contain the ball-limit estimate: {label}", inside, value=best)
    return res


def cauchy(cfg: SuiteConfig, cache: _Cache) -> CriterionResult:
    res = CriterionResult(8, "cauchy_quadrature")
    rng = np.random.default_rng(cfg.seed + 1)
    hulls = [random_planar_hull(rng) for _ in range(cfg.n_hulls)]
    grids = cfg.cauchy_grids
    len_err = np.empty((len(hulls), len(grids)))
    area_err = np.empty_like(len_err)
    for i, p in enumerate(hulls):
        per, area = perimeter(p), volume(p)
        for j, m in enumerate(grids):
            prof = support_profile(p, m)
            len_err[i, j] = abs(cauchy_length(prof) - per) / per
            area_err[i, j] = abs(cauchy_area(prof) - area) / area
    res.check("max relative length error at finest grid", len_err[:, -1].max(), 0.0, 2e-2)
    res.check("max relative area error at finest grid", area_err[:, -1].max(), 0.0, 2e-2)
    res.assert_true("area error decreases as m doubles, every hull",
                    bool(np.all(np.diff(area_err, axis=1) < 0)))
    res.assert_true("max length error decreases as m doubles",
                    bool(np.all(np.diff(len_err.max(axis=0)) < 0)),
                    max_errors=len_err.max(axis=0).tolist())
    worst = 0.0
    m = grids[-1]
    for p, q in zip(hulls[0::2], hulls[1::2]):
        exact = mixed_volume_polarization([p, q])
        quad = cauchy_mixed_area(support_profile(p, m), support_profile(q, m))
        worst = max(worst, abs(quad - exact) / exact)
    res.check("max relative mixed-area error vs polarization", worst, 0.0, 3e-2)
    return res


CRITERIA = (spiral_mixed, gao_vitale, bm_max, factorization, finite_tsirelson,
            dimension_invariance, exact_routes, cauchy)


def run_suite(cfg: SuiteConfig | None = None, only=None):
    """Run the criteria (all, or the numbers in ``only``) and return results."""
    cfg = cfg or SuiteConfig()
    cache = _Cache()
    out = []
    for i, crit in enumerate(CRITERIA, start=1):
        if only is not None and i not in only:
            continue
        out.append(crit(cfg, cache))
    return out


def with_seed(cfg: SuiteConfig, seed: int) -> SuiteConfig:
    return replace(cfg, seed=seed)
