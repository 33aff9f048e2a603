"""Seeded Monte Carlo sampling of coupled trajectories.

Randomness comes from the counter-based Philox-4x64 generator, so the
uniform stream for a given seed is a documented, reproducible function of
the counter. Each replica owns a fixed, 4-aligned block of counter
positions (replica r uses doubles [r * stride, r * stride + draws), with
stride = draws rounded up to a multiple of 4, matching Philox's four
64-bit outputs per counter tick). Estimates therefore depend only on
(inputs, seed, replica index), never on how replicas are batched or
partitioned across workers.

Categorical sampling inverts the cached float64 cumulative row; the final
cell absorbs any rounding slack, so a draw always lands in a valid cell
and zero-width cells are never selected. The per-draw conversion bias is
far below Monte Carlo error at any usable sample count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import require_same_space
from .errors import ZeroSamples
from .kernels import CouplingKernel, JointDist

_BLOCK = 4  # Philox-4x64 emits four 64-bit words per counter increment


@dataclass(frozen=True)
class Seed:
    """64-bit unsigned seed for a reproducible simulation stream."""

    value: int

    def __post_init__(self):
        if not 0 <= self.value < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.value}")


def _as_seed(seed) -> Seed:
    return seed if isinstance(seed, Seed) else Seed(int(seed))


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Bernoulli frequency estimate with its binomial standard error."""

    estimate: float
    standard_error: float
    samples: int

    @classmethod
    def from_count(cls, count: int, samples: int) -> "MonteCarloEstimate":
        p = count / samples
        return cls(p, math.sqrt(p * (1.0 - p) / samples), samples)


def _stride(draws: int) -> int:
    return -(-draws // _BLOCK) * _BLOCK


def _replica_uniforms(seed: Seed, draws: int, first_replica: int, count: int) -> np.ndarray:
    """Uniforms for replicas [first_replica, first_replica + count), one row each."""
    stride = _stride(draws)
    bits = np.random.Philox(key=seed.value)
    if first_replica:
        bits.advance(first_replica * (stride // _BLOCK))
    u = np.random.Generator(bits).random((count, stride))
    return u[:, :draws]


def _float_cdf(probs) -> np.ndarray:
    return np.cumsum(np.array([float(p) for p in probs]))


def _pick(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Smallest cell whose cumulative weight exceeds u; last cell soaks up slack."""
    return np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)


def _walk_pairs(
    kernel: CouplingKernel,
    initial_joint: JointDist,
    samples: int,
    draws: int,
    seed: Seed,
    first_replica: int = 0,
) -> np.ndarray:
    """Pair-state index trajectories, one row per replica, one column per step."""
    u = _replica_uniforms(seed, draws, first_replica, samples)
    start_cdf = _float_cdf(initial_joint.probs)
    row_cdf = np.vstack([_float_cdf(row) for row in kernel.rows])
    m = row_cdf.shape[0]
    w = np.empty((samples, draws), dtype=np.int64)
    w[:, 0] = _pick(start_cdf, u[:, 0])
    for j in range(1, draws):
        current = row_cdf[w[:, j - 1]]
        w[:, j] = np.minimum((u[:, j][:, None] >= current).sum(axis=1), m - 1)
    return w


def sample_coupled_path(
    kernel: CouplingKernel,
    initial_joint: JointDist,
    horizon: int,
    rng: np.random.Generator,
) -> list[tuple[str, str]]:
    """Draw one pair trajectory of length horizon + 1 from the given stream.

    Consumes exactly horizon + 1 uniforms: one for the initial pair, one
    per transition, in path order.
    """
    require_same_space(kernel.space, initial_joint.space)
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    labels = kernel.space.labels
    n = len(labels)
    u = rng.random(horizon + 1)
    w = int(_pick(_float_cdf(initial_joint.probs), u[:1])[0])
    path = [(labels[w // n], labels[w % n])]
    for j in range(1, horizon + 1):
        w = int(_pick(_float_cdf(kernel.rows[w]), u[j : j + 1])[0])
        path.append((labels[w // n], labels[w % n]))
    return path


def estimate_tail(
    kernel: CouplingKernel,
    initial_joint: JointDist,
    step: int,
    samples: int,
    seed,
) -> MonteCarloEstimate:
    """Monte Carlo estimate of the probability of no meeting through ``step``."""
    require_same_space(kernel.space, initial_joint.space)
    if step < 0:
        raise ValueError("step must be non-negative")
    if samples <= 0:
        raise ZeroSamples(f"need a positive sample count, got {samples}")
    seed = _as_seed(seed)
    n = kernel.space.n
    w = _walk_pairs(kernel, initial_joint, samples, step + 1, seed)
    never_met = (w // n != w % n).all(axis=1)
    return MonteCarloEstimate.from_count(int(never_met.sum()), samples)


def estimate_stuck_event(
    kernel: CouplingKernel,
    initial_joint: JointDist,
    prefix,
    samples: int,
    seed,
) -> MonteCarloEstimate:
    """Monte Carlo estimate of the stuck process starting with ``prefix``.

    Each sampled pair trajectory is stuck (first coordinate until the
    meeting, second afterwards) and counted when its first len(prefix)
    states match the prefix exactly.
    """
    require_same_space(kernel.space, initial_joint.space)
    target = np.array([kernel.space.index(label) for label in prefix], dtype=np.int64)
    if target.size == 0:
        raise ValueError("prefix must contain at least one state")
    if samples <= 0:
        raise ZeroSamples(f"need a positive sample count, got {samples}")
    seed = _as_seed(seed)
    n = kernel.space.n
    w = _walk_pairs(kernel, initial_joint, samples, len(target), seed)
    x, y = w // n, w % n
    met = x == y
    met_before = np.zeros_like(met)
    met_before[:, 1:] = np.cumsum(met[:, :-1], axis=1) > 0
    stuck = np.where(met_before, y, x)
    matches = (stuck == target).all(axis=1)
    return MonteCarloEstimate.from_count(int(matches.sum()), samples)
