"""Seeded random streams, estimate aggregation and the experiment runner.

Streams are counter based (Philox keyed by ``(root_seed, stream_id)``), so
every chunk of a Monte-Carlo run owns its own stream regardless of which
worker executes it. Chunk results are merged in chunk order, which makes a
run bit-reproducible for a given seed independently of the worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import ConfigError, GeometryError

Z95 = 1.96
DEFAULT_SEED = 42
_U64 = 1 << 64

__all__ = [
    "RngStream",
    "MCEstimate",
    "Accumulator",
    "aggregate",
    "map_chunks",
    "default_seed",
    "ExperimentReport",
    "register_experiment",
    "run_experiment",
    "EXPERIMENTS",
]


def default_seed() -> int:
    """Seed used when none is given; ``GAUSSMIX_SEED`` overrides 42."""
    env = os.environ.get("GAUSSMIX_SEED")
    if env is None or env == "":
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError as exc:
        raise ConfigError(f"GAUSSMIX_SEED must be an integer, got {env!r}") from exc


@dataclass(frozen=True)
class RngStream:
    """Position in a counter-based random stream.

    Draws are a pure function of ``(root_seed, stream_id, counter)``;
    ``counter`` counts Philox blocks of four 64-bit words.
    """

    root_seed: int
    stream_id: int = 0
    counter: int = 0

    def __post_init__(self):
        for name in ("root_seed", "stream_id", "counter"):
            v = getattr(self, name)
            if not 0 <= int(v) < _U64:
                raise GeometryError(f"{name} must fit in an unsigned 64-bit integer, got {v}")

    def generator(self) -> np.random.Generator:
        bitgen = np.random.Philox(key=np.array([self.root_seed, self.stream_id], dtype=np.uint64))
        if self.counter:
            bitgen.advance(self.counter)
        return np.random.Generator(bitgen)

    def substream(self, index: int) -> "RngStream":
        """Child stream, e.g. for chunk ``index`` of a run."""
        words = np.random.SeedSequence([self.stream_id, int(index)]).generate_state(2, np.uint32)
        child = (int(words[0]) << 32) | int(words[1])
        return RngStream(self.root_seed, child, 0)

    def named(self, label: str) -> "RngStream":
        """Stream reserved for one estimator, so that different estimators
        run with the same seed do not share draws."""
        words = np.frombuffer(label.encode(), dtype=np.uint8).astype(np.uint32)
        key = np.random.SeedSequence(words.tolist() + [self.stream_id]).generate_state(2, np.uint32)
        return RngStream(self.root_seed, (int(key[0]) << 32) | int(key[1]), 0)


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    n_samples: int
    seed: int | None = None

    @property
    def ci95(self) -> tuple[float, float]:
        return (self.mean - Z95 * self.stderr, self.mean + Z95 * self.stderr)

    def scaled(self, factor: float) -> "MCEstimate":
        return MCEstimate(self.mean * factor, self.stderr * abs(factor), self.n_samples, self.seed)

    def to_dict(self, estimator: str | None = None, constant: float | None = None) -> dict:
        out = {"value": self.mean, "stderr": self.stderr, "n": self.n_samples, "seed": self.seed,
               "ci95": list(self.ci95)}
        if estimator is not None:
            out["estimator"] = estimator
        if constant is not None:
            out["constant"] = constant
        return out


@dataclass
class Accumulator:
    """Running ``(count, mean, M2)`` triple with Chan's pairwise merge."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def update(self, x: float) -> None:
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)

    def update_batch(self, xs) -> None:
        xs = np.asarray(xs, dtype=float).ravel()
        if xs.size == 0:
            return
        m = float(xs.mean())
        self.merge(Accumulator(int(xs.size), m, float(np.sum((xs - m) ** 2))))

    def merge(self, other: "Accumulator") -> None:
        if other.count == 0:
            return
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean, other.m2
            return
        n = self.count + other.count
        delta = other.mean - self.mean
        self.mean += delta * other.count / n
        self.m2 += other.m2 + delta * delta * self.count * other.count / n
        self.count = n

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else float("nan")

    def estimate(self, seed: int | None = None) -> MCEstimate:
        if self.count < 2:
            raise GeometryError(f"need at least 2 samples, got {self.count}")
        stderr = math.sqrt(max(self.variance, 0.0) / self.count)
        return MCEstimate(self.mean, stderr, self.count, seed)


def aggregate(samples, seed: int | None = None) -> MCEstimate:
    """Mean, standard error and 95% interval of a sample stream.

    ``samples`` may be an array, an iterable of scalars, or an iterable of
    array chunks; chunks are merged in order.
    """
    acc = Accumulator()
    if isinstance(samples, np.ndarray):
        acc.update_batch(samples)
    else:
        for item in samples:
            if np.ndim(item) == 0:
                acc.update(float(item))
            else:
                acc.update_batch(item)
    return acc.estimate(seed)


def _chunk_sizes(n_total: int, chunk_size: int):
    full, rest = divmod(n_total, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def map_chunks(fn: Callable, n_total: int, chunk_size: int, stream: RngStream,
               args: tuple = (), workers: int = 1) -> list:
    """Run ``fn(size, stream_i, *args)`` for every chunk, results in chunk order.

    ``fn`` and ``args`` must be picklable when ``workers > 1``.
    """
    sizes = _chunk_sizes(n_total, chunk_size)
    streams = [stream.substream(i) for i in range(len(sizes))]
    if workers <= 1 or len(sizes) == 1:
        return [fn(s, st, *args) for s, st in zip(sizes, streams)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, s, st, *args) for s, st in zip(sizes, streams)]
        return [f.result() for f in futures]


@dataclass
class ExperimentReport:
    name: str
    estimate: MCEstimate
    target: float | None = None
    allowance: float = 0.0
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool | None:
        if self.target is None:
            return None
        return abs(self.estimate.mean - self.target) <= Z95 * self.estimate.stderr + self.allowance

    def to_dict(self) -> dict:
        out = {"name": self.name, **self.params, "seed": self.estimate.seed,
               "value": self.estimate.mean, "stderr": self.estimate.stderr,
               "n": self.estimate.n_samples, "target": self.target,
               "allowance": self.allowance, "pass": self.passed}
        return out


EXPERIMENTS: dict[str, Callable[..., ExperimentReport]] = {}


def register_experiment(name: str):
    def deco(fn):
        EXPERIMENTS[name] = fn
        return fn
    return deco


def run_experiment(config: dict) -> ExperimentReport:
    """Run a registered experiment described by ``{"exp": name, **params}``."""
    from . import experiments  # noqa: F401  (registers the built-in experiments)

    if not isinstance(config, dict) or "exp" not in config:
        raise ConfigError("experiment config needs an 'exp' entry")
    params = dict(config)
    name = params.pop("exp")
    try:
        runner = EXPERIMENTS[name]
    except KeyError:
        raise ConfigError(f"unknown experiment {name!r}; known: {sorted(EXPERIMENTS)}") from None
    try:
        return runner(**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {name!r}: {exc}") from exc
