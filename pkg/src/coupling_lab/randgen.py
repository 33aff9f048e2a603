"""Random exact instances for property tests and experiment scripts.

All weights are dyadic (denominator a power of two, at most the chosen
resolution) and rows are normalized exactly, so generated objects are
valid by construction and downstream arithmetic stays cheap.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .core import Dist, StateSpace, StochMatrix
from .kernels import CouplingKernel, JointDist

DEFAULT_RESOLUTION = 64


def random_composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Split ``total`` into ``parts`` non-negative integers, uniformly via cuts."""
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0] + cuts + [total]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def _weights(rng, parts, resolution) -> tuple[Fraction, ...]:
    return tuple(Fraction(k, resolution) for k in random_composition(rng, resolution, parts))


def random_dist(rng: random.Random, space: StateSpace, resolution: int = DEFAULT_RESOLUTION) -> Dist:
    return Dist(space, _weights(rng, space.n, resolution))


def random_stoch_matrix(
    rng: random.Random, space: StateSpace, resolution: int = DEFAULT_RESOLUTION
) -> StochMatrix:
    return StochMatrix(space, tuple(_weights(rng, space.n, resolution) for _ in range(space.n)))


def random_joint(
    rng: random.Random, space: StateSpace, resolution: int = DEFAULT_RESOLUTION
) -> JointDist:
    return JointDist(space, _weights(rng, space.n ** 2, resolution))


def random_kernel(
    rng: random.Random, space: StateSpace, resolution: int = DEFAULT_RESOLUTION
) -> CouplingKernel:
    """Row-stochastic pair kernel with no structure imposed; almost never faithful."""
    m = space.n ** 2
    return CouplingKernel(space, tuple(_weights(rng, m, resolution) for _ in range(m)))


def mix_kernels(a: CouplingKernel, b: CouplingKernel, weight: Fraction) -> CouplingKernel:
    """Exact convex combination weight * a + (1 - weight) * b, row by row.

    Faithfulness is preserved: both defining sum conditions are linear in
    the kernel entries.
    """
    if a.space != b.space:
        raise ValueError("kernels must share a state space")
    if not 0 <= weight <= 1:
        raise ValueError(f"mixing weight must lie in [0, 1], got {weight}")
    rows = tuple(
        tuple(weight * p + (1 - weight) * q for p, q in zip(ra, rb))
        for ra, rb in zip(a.rows, b.rows)
    )
    return CouplingKernel(a.space, rows)
