"""Seeded synthetic bid data.

Features: each coordinate is ``exp(N(mu, 0.5^2))`` with ``mu`` equal to 0 or
1 with probability 1/2. Bids follow one of two scenarios:

* ``linear``  -- ``b = max(sum(x) + beta, 0)``
* ``bimodal`` -- ``s = max(sum(x) + beta, 0)``; ``b = 40 + alpha`` if
  ``s > 30`` else ``s``

with ``alpha, beta ~ N(0, sigma^2)`` drawn independently.

Random numbers
--------------
Every draw role gets its own Philox4x64-10 stream keyed by
``mix(seed, role)``, where ``mix`` chains two SplitMix64 finalisers.
Uniforms are ``(raw >> 11) * 2^-53``; normals come from Box-Muller on
consecutive uniform pairs ``(u1, u2)`` as ``sqrt(-2 ln(1 - u1)) * cos(2 pi u2)``
followed by the matching ``sin`` term. Draws are consumed in row-major order.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import Dataset, ValidationError

MASK64 = (1 << 64) - 1
SCENARIOS = ("linear", "bimodal")
SIGMAS = (0.01, 0.1, 1.0, 2.0, 4.0)

MIXTURE_MEANS = (0.0, 1.0)
MIXTURE_SCALE = 0.5
MIXTURE_WEIGHT = 0.5
BIMODAL_CUTOFF = 30.0
BIMODAL_LEVEL = 40.0

# Stream ids per draw role.
STREAM_COMPONENT = 1
STREAM_FEATURE_NORMAL = 2
STREAM_BETA = 3
STREAM_ALPHA = 4


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def mix(seed: int, stream_id: int) -> int:
    return splitmix64(splitmix64(seed & MASK64) ^ (stream_id & MASK64))


class Stream:
    """Uniform and Gaussian draws from one Philox stream."""

    def __init__(self, seed: int, stream_id: int):
        self._bits = np.random.Philox(key=mix(seed, stream_id))

    def uniform(self, n: int) -> np.ndarray:
        raw = self._bits.random_raw(n)
        return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normal(self, n: int) -> np.ndarray:
        pairs = (n + 1) // 2
        u = self.uniform(2 * pairs).reshape(pairs, 2)
        radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        angle = 2.0 * np.pi * u[:, 1]
        z = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
        return z.reshape(-1)[:n]


@dataclass(frozen=True)
class ScenarioConfig:
    n: int
    d: int = 10
    noise_sigma: float = 0.1
    scenario: str = "linear"
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValidationError("n and d must be >= 1")
        if not self.noise_sigma >= 0:
            raise ValidationError("noise_sigma must be >= 0")
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"scenario must be one of {SCENARIOS}")

    def derive(self, stream_id: int) -> ScenarioConfig:
        """Same scenario with an independent seed (used for splits and replicas)."""
        return replace(self, seed=mix(self.seed, stream_id))


def gen_features(config: ScenarioConfig) -> np.ndarray:
    size = config.n * config.d
    comp = Stream(config.seed, STREAM_COMPONENT).uniform(size) >= MIXTURE_WEIGHT
    mu = np.where(comp, MIXTURE_MEANS[1], MIXTURE_MEANS[0])
    z = Stream(config.seed, STREAM_FEATURE_NORMAL).normal(size)
    return np.exp(mu + MIXTURE_SCALE * z).reshape(config.n, config.d)


def _noise(config: ScenarioConfig, stream_id: int, n: int) -> np.ndarray:
    if config.noise_sigma == 0:
        return np.zeros(n)
    return config.noise_sigma * Stream(config.seed, stream_id).normal(n)


def gen_linear_bids(features, config: ScenarioConfig) -> np.ndarray:
    features = np.asarray(features, dtype=float)
    beta = _noise(config, STREAM_BETA, features.shape[0])
    return np.maximum(features.sum(axis=1) + beta, 0.0)


def gen_bimodal_bids(features, config: ScenarioConfig) -> np.ndarray:
    features = np.asarray(features, dtype=float)
    s = gen_linear_bids(features, config)
    alpha = _noise(config, STREAM_ALPHA, features.shape[0])
    # A negative alpha below -40 would break bid >= 0; clamp like s.
    return np.where(s > BIMODAL_CUTOFF, np.maximum(BIMODAL_LEVEL + alpha, 0.0), s)


def generate(config: ScenarioConfig) -> Dataset:
    X = gen_features(config)
    if config.scenario == "linear":
        bids = gen_linear_bids(X, config)
    else:
        bids = gen_bimodal_bids(X, config)
    return Dataset(X, bids)


def mixture_moments() -> tuple[float, float]:
    """Mean and variance of one feature coordinate."""
    s2 = MIXTURE_SCALE**2
    means = np.asarray(MIXTURE_MEANS)
    weights = np.array([1 - MIXTURE_WEIGHT, MIXTURE_WEIGHT])
    first = weights @ np.exp(means + s2 / 2)
    second = weights @ np.exp(2 * means + 2 * s2)
    return float(first), float(second - first**2)
