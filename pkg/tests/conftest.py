import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from gaussmix.brownian import spiral_pair_samples
from gaussmix.convex import convex_hull

# derandomized so that property suites are reproducible run to run
settings.register_profile("gaussmix", derandomize=True, deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("gaussmix")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_hull(seed, d, n_min=None, n_max=12, spread=1.0):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min or d + 1, n_max + 1))
    pts = spread * rng.uniform(-1.0, 1.0, (n, d)) + rng.uniform(-1.0, 1.0, d)
    return convex_hull(pts)


def random_rotation(seed, d):
    q, r = np.linalg.qr(np.random.default_rng(seed).standard_normal((d, d)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


@pytest.fixture(scope="session")
def full_pairs():
    """Acceptance-scale pair run: 10^5 pairs of 10^4-step planar paths."""
    return spiral_pair_samples(10_000, 100_000, 42)


# one pass/fail line per acceptance criterion, printed after the test report
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
