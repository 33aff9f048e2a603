"""Exact probability vectors and row-stochastic matrices over finite state spaces.

All probabilities are `fractions.Fraction` values, so evolution, comparison
and total variation distance are exact: equality checks are decidable and
never subject to rounding. Floats are rejected at the door to keep it that
way. Every type is immutable after validation; every operation is a pure
function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NegativeEntry, SpaceMismatch, SumNotOne, UnknownState

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rat(value) -> Fraction:
    """Coerce an int, string like "3/8", or Fraction to an exact Fraction.

    Floats are refused: a float argument almost always means an inexact
    value leaked in upstream.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(f"exact rational required, got float {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class StateSpace:
    """Ordered, distinct state labels; index() is a bijection onto 0..n-1."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate state labels in {self.labels}")
        if not self.labels:
            raise ValueError("state space must be non-empty")
        for label in self.labels:
            if label == "" or "," in label:
                # commas are the path separator in serialized path laws
                raise ValueError(f"state label {label!r} must be non-empty and comma-free")
        object.__setattr__(self, "_index", {l: i for i, l in enumerate(self.labels)})

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownState(f"state {label!r} not in space {self.labels}") from None

    def __contains__(self, label) -> bool:
        return label in self._index


def _validated_probs(probs, n: int, what: str) -> tuple[Fraction, ...]:
    """Coerce to Fractions and enforce non-negativity and an exact unit sum."""
    out = tuple(as_rat(p) for p in probs)
    if len(out) != n:
        raise SpaceMismatch(f"{what}: expected {n} entries, got {len(out)}")
    for i, p in enumerate(out):
        if p < 0:
            raise NegativeEntry(f"{what}: entry {i} is {p}")
    total = sum(out, ZERO)
    if total != 1:
        raise SumNotOne(ONE - total, what)
    return out


@dataclass(frozen=True)
class Dist:
    """Exact probability vector over a StateSpace."""

    space: StateSpace
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "probs", _validated_probs(self.probs, self.space.n, "distribution")
        )

    def prob(self, label: str) -> Fraction:
        return self.probs[self.space.index(label)]

    def support(self) -> tuple[str, ...]:
        return tuple(l for l, p in zip(self.space.labels, self.probs) if p)


@dataclass(frozen=True)
class StochMatrix:
    """Row-stochastic transition matrix; each row is a valid distribution."""

    space: StateSpace
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = self.space.n
        if len(self.rows) != n:
            raise SpaceMismatch(f"matrix: expected {n} rows, got {len(self.rows)}")
        rows = tuple(
            _validated_probs(row, n, f"matrix row {self.space.labels[i]!r}")
            for i, row in enumerate(self.rows)
        )
        object.__setattr__(self, "rows", rows)

    def prob(self, frm: str, to: str) -> Fraction:
        return self.rows[self.space.index(frm)][self.space.index(to)]

    def row(self, frm: str) -> Dist:
        return Dist(self.space, self.rows[self.space.index(frm)])


def make_dist(space: StateSpace, probs) -> Dist:
    """Validate a probability vector; raises NegativeEntry or SumNotOne."""
    return Dist(space, tuple(probs))


def make_stoch_matrix(space: StateSpace, rows) -> StochMatrix:
    return StochMatrix(space, tuple(tuple(row) for row in rows))


def delta(space: StateSpace, label: str) -> Dist:
    """Point mass at ``label``."""
    i = space.index(label)
    return Dist(space, tuple(ONE if j == i else ZERO for j in range(space.n)))


def uniform_dist(space: StateSpace) -> Dist:
    p = Fraction(1, space.n)
    return Dist(space, (p,) * space.n)


def require_same_space(a: StateSpace, b: StateSpace, what: str = "operands") -> None:
    if a != b:
        raise SpaceMismatch(f"{what} use different state spaces: {a.labels} vs {b.labels}")


def evolve(dist: Dist, matrix: StochMatrix) -> Dist:
    """One exact step of the vector-matrix product: the next-step law."""
    require_same_space(dist.space, matrix.space)
    n = dist.space.n
    out = [ZERO] * n
    for i, p in enumerate(dist.probs):
        if p:
            row = matrix.rows[i]
            for j in range(n):
                if row[j]:
                    out[j] += p * row[j]
    return Dist(dist.space, tuple(out))


def evolve_n(dist: Dist, matrix: StochMatrix, steps: int) -> Dist:
    """Exact t-step evolution; zero steps returns the input unchanged."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    require_same_space(dist.space, matrix.space)
    out = dist
    for _ in range(steps):
        out = evolve(out, matrix)
    return out


def tv_distance(a: Dist, b: Dist) -> Fraction:
    """Total variation distance, computed as half the L1 distance."""
    require_same_space(a.space, b.space)
    return sum((abs(p - q) for p, q in zip(a.probs, b.probs)), ZERO) / 2
