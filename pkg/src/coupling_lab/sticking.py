"""Exact finite-horizon analysis of couplings: meeting-time tails, the
sticking construction on full path laws, and the total-variation bound table.

Path laws are compared exactly at the level of whole finite-horizon
trajectories, not just per-time marginals: marginal equality is necessary
but not sufficient, and path-law equality at every horizon is the strongest
finitely checkable statement.

Exact enumeration is guarded by a term limit (default 2e6 terms, overridable
per call or through the COUPLING_LAB_LIMIT environment variable). Exceeding
the guard is an error; this module never falls back to sampling.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from .core import (
    ZERO,
    Dist,
    StateSpace,
    StochMatrix,
    evolve,
    require_same_space,
    tv_distance,
)
from .errors import EnumerationLimitExceeded, ParseError
from .kernels import CouplingKernel, JointDist, marginal_x, marginal_y

DEFAULT_ENUMERATION_LIMIT = 2_000_000
LIMIT_ENV_VAR = "COUPLING_LAB_LIMIT"


def enumeration_limit(override: int | None = None) -> int:
    """Resolve the enumeration guard: explicit override, else env var, else default."""
    if override is not None:
        return int(override)
    env = os.environ.get(LIMIT_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"{LIMIT_ENV_VAR} must be an integer, got {env!r}") from None
    return DEFAULT_ENUMERATION_LIMIT


def _guard_terms(terms: int, limit: int | None, what: str) -> None:
    cap = enumeration_limit(limit)
    if terms > cap:
        raise EnumerationLimitExceeded(
            f"{what} needs {terms} enumeration terms, over the limit of {cap}"
        )


@dataclass(frozen=True)
class PathDist:
    """Exact distribution over state sequences of length horizon + 1.

    Stored sparsely: paths with zero probability are dropped, so equal
    laws compare equal as dataclasses.
    """

    space: StateSpace
    horizon: int
    probs: dict[tuple[str, ...], Fraction]

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError("horizon must be non-negative")
        cleaned = {}
        total = ZERO
        for path, p in self.probs.items():
            path = tuple(path)
            if len(path) != self.horizon + 1:
                raise ValueError(f"path {path} has length {len(path)}, expected {self.horizon + 1}")
            for label in path:
                self.space.index(label)
            if p < 0:
                raise ValueError(f"path {path} has negative probability {p}")
            total += p
            if p:
                cleaned[path] = p
        if total != 1:
            raise ValueError(f"path probabilities sum to {total}, expected 1")
        object.__setattr__(self, "probs", cleaned)

    def prob(self, path) -> Fraction:
        return self.probs.get(tuple(path), ZERO)


@dataclass(frozen=True)
class TailVector:
    """Meeting-time tail: entry i is the exact probability the coordinates
    have not met by step i. Non-increasing by construction."""

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        prev = Fraction(1)
        for i, p in enumerate(self.entries):
            if not 0 <= p <= 1:
                raise ValueError(f"tail entry {i} is {p}, outside [0, 1]")
            if p > prev:
                raise ValueError(f"tail increases at entry {i}: {prev} -> {p}")
            prev = p


@dataclass(frozen=True)
class Discrepancy:
    """One path where the stuck law and the chain law disagree."""

    path: tuple[str, ...]
    stuck: Fraction
    markov: Fraction


@dataclass(frozen=True)
class StickReport:
    """Outcome of verify_sticking: verdict, per-path discrepancies, tail."""

    verdict: bool
    discrepancies: tuple[Discrepancy, ...]
    tail: TailVector

    def __post_init__(self):
        object.__setattr__(self, "discrepancies", tuple(self.discrepancies))
        if self.verdict != (len(self.discrepancies) == 0):
            raise ValueError("verdict must be true exactly when there are no discrepancies")


class BoundRow(NamedTuple):
    """One step of the tv-versus-tail table."""

    step: int
    tv: Fraction
    tail: Fraction
    holds: bool


def coupling_time_tail(
    kernel: CouplingKernel, initial_joint: JointDist, horizon: int
) -> TailVector:
    """Exact Pr(no meeting through step i) for i = 0..horizon, by taboo evolution.

    Only the mass that has stayed off the diagonal is propagated: restrict
    the initial joint law to off-diagonal pairs, then repeatedly apply the
    kernel and re-restrict. The surviving mass after i steps is the tail
    at i.
    """
    require_same_space(kernel.space, initial_joint.space)
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    n = kernel.space.n
    m = n * n
    off_diagonal = [w for w in range(m) if w // n != w % n]
    sigma = [ZERO] * m
    for w in off_diagonal:
        sigma[w] = initial_joint.probs[w]
    entries = [sum(sigma, ZERO)]
    for _ in range(horizon):
        nxt = [ZERO] * m
        for w, p in enumerate(sigma):
            if p:
                row = kernel.rows[w]
                for w2 in off_diagonal:
                    if row[w2]:
                        nxt[w2] += p * row[w2]
        sigma = nxt
        entries.append(sum(sigma, ZERO))
    return TailVector(tuple(entries))


def markov_path_distribution(
    dist: Dist, matrix: StochMatrix, horizon: int, limit: int | None = None
) -> PathDist:
    """Exact law of the first horizon + 1 states of the chain started at ``dist``."""
    require_same_space(dist.space, matrix.space)
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    n = dist.space.n
    _guard_terms(n ** (horizon + 1), limit, "chain path law")
    labels = dist.space.labels
    acc: dict[tuple[str, ...], Fraction] = {}

    def extend(prefix: tuple[str, ...], state: int, p: Fraction) -> None:
        if len(prefix) == horizon + 1:
            acc[prefix] = acc.get(prefix, ZERO) + p
            return
        row = matrix.rows[state]
        for t in range(n):
            if row[t]:
                extend(prefix + (labels[t],), t, p * row[t])

    for s in range(n):
        if dist.probs[s]:
            extend((labels[s],), s, dist.probs[s])
    return PathDist(dist.space, horizon, acc)


def enumerate_stuck_paths(
    kernel: CouplingKernel,
    initial_joint: JointDist,
    horizon: int,
    limit: int | None = None,
) -> Iterator[tuple[tuple[str, ...], int | None, Fraction]]:
    """Enumerate every positive-probability pair trajectory, already stuck.

    Yields (stuck path, meeting time, probability) triples. The stuck path
    follows the first coordinate until the coordinates first meet and the
    second coordinate afterwards; the meeting time is None if they never
    meet within the horizon, in which case the stuck path is the first
    coordinate throughout.
    """
    require_same_space(kernel.space, initial_joint.space)
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    n = kernel.space.n
    m = n * n
    _guard_terms(m ** (horizon + 1), limit, "stuck path law")
    labels = kernel.space.labels

    def walk(
        step: int, pair: int, p: Fraction, met_at: int | None, stuck: tuple[str, ...]
    ) -> Iterator[tuple[tuple[str, ...], int | None, Fraction]]:
        x, y = divmod(pair, n)
        # the stuck path switches coordinates only strictly after the meeting
        out = labels[y] if met_at is not None else labels[x]
        if met_at is None and x == y:
            met_at = step
        stuck = stuck + (out,)
        if step == horizon:
            yield stuck, met_at, p
            return
        row = kernel.rows[pair]
        for w2 in range(m):
            if row[w2]:
                yield from walk(step + 1, w2, p * row[w2], met_at, stuck)

    for w in range(m):
        if initial_joint.probs[w]:
            yield from walk(0, w, initial_joint.probs[w], None, ())


def stuck_path_distribution(
    kernel: CouplingKernel,
    initial_joint: JointDist,
    horizon: int,
    limit: int | None = None,
) -> PathDist:
    """Exact law of the stuck process over the full horizon."""
    acc: dict[tuple[str, ...], Fraction] = {}
    for path, _met, p in enumerate_stuck_paths(kernel, initial_joint, horizon, limit):
        acc[path] = acc.get(path, ZERO) + p
    return PathDist(kernel.space, horizon, acc)


def verify_sticking(
    kernel: CouplingKernel,
    initial_joint: JointDist,
    matrix: StochMatrix,
    horizon: int,
    limit: int | None = None,
) -> StickReport:
    """Decide whether sticking this coupling reproduces the chain law exactly.

    Compares the stuck path law against the chain path law started from the
    first-coordinate marginal of the initial joint, path by path. Any
    difference is a discrepancy; the meeting-time tail for the same inputs
    is included for context.
    """
    require_same_space(kernel.space, matrix.space)
    stuck = stuck_path_distribution(kernel, initial_joint, horizon, limit)
    markov = markov_path_distribution(marginal_x(initial_joint), matrix, horizon, limit)
    space = kernel.space
    paths = set(stuck.probs) | set(markov.probs)
    discrepancies = []
    for path in sorted(paths, key=lambda q: tuple(space.index(l) for l in q)):
        a = stuck.prob(path)
        b = markov.prob(path)
        if a != b:
            discrepancies.append(Discrepancy(path, a, b))
    tail = coupling_time_tail(kernel, initial_joint, horizon)
    return StickReport(not discrepancies, tuple(discrepancies), tail)


def tv_bound_report(
    matrix: StochMatrix,
    kernel: CouplingKernel,
    initial_joint: JointDist,
    horizon: int,
) -> list[BoundRow]:
    """Tabulate tv(mu P^i, nu P^i) against the meeting tail, step by step.

    For kernels whose diagonal rows stay on the diagonal (now-equals-forever)
    and whose evolution is Markovian over the horizon, the bound holds at
    every step; for arbitrary kernels the table is informational only.
    """
    require_same_space(kernel.space, matrix.space)
    require_same_space(kernel.space, initial_joint.space)
    mu = marginal_x(initial_joint)
    nu = marginal_y(initial_joint)
    tail = coupling_time_tail(kernel, initial_joint, horizon)
    rows = []
    for i in range(horizon + 1):
        tv = tv_distance(mu, nu)
        rows.append(BoundRow(i, tv, tail.entries[i], tv <= tail.entries[i]))
        if i < horizon:
            mu = evolve(mu, matrix)
            nu = evolve(nu, matrix)
    return rows


def has_now_equals_forever(kernel: CouplingKernel) -> bool:
    """True when every diagonal row's support lies on the diagonal."""
    n = kernel.space.n
    for s in range(n):
        row = kernel.rows[s * n + s]
        for w2, q in enumerate(row):
            if q and w2 // n != w2 % n:
                return False
    return True


__all__ = [
    "DEFAULT_ENUMERATION_LIMIT",
    "LIMIT_ENV_VAR",
    "BoundRow",
    "Discrepancy",
    "PathDist",
    "StickReport",
    "TailVector",
    "coupling_time_tail",
    "enumerate_stuck_paths",
    "enumeration_limit",
    "has_now_equals_forever",
    "markov_path_distribution",
    "stuck_path_distribution",
    "tv_bound_report",
    "verify_sticking",
]
