"""Joint distributions and coupling kernels on the pair space.

A coupling kernel is a row-stochastic matrix over ordered state pairs,
indexed row-major: pair (u, v) sits at index(u) * n + index(v), both as
rows and as columns. This single convention is used everywhere, including
the on-disk formats.

The three property checkers return a CheckReport listing every exact
violation. check_faithful and check_strong_markovian decide the same
property through structurally different computations (a raw double-sum
scan vs joint evolution plus marginal extraction), so each serves as an
independent oracle for the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .core import (
    ONE,
    ZERO,
    Dist,
    StateSpace,
    StochMatrix,
    _validated_probs,
    evolve,
    require_same_space,
)
from .errors import SpaceMismatch


def pair_labels(space: StateSpace) -> tuple[tuple[str, str], ...]:
    """All ordered pairs (u, v) in row-major index order."""
    return tuple((u, v) for u in space.labels for v in space.labels)


def pair_index(space: StateSpace, u: str, v: str) -> int:
    return space.index(u) * space.n + space.index(v)


@dataclass(frozen=True)
class JointDist:
    """Exact distribution over ordered pairs of states.

    probs has length n^2 in row-major pair order; both marginals are
    automatically valid distributions over the base space.
    """

    space: StateSpace
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        n = self.space.n
        object.__setattr__(
            self, "probs", _validated_probs(self.probs, n * n, "joint distribution")
        )

    def prob(self, u: str, v: str) -> Fraction:
        return self.probs[pair_index(self.space, u, v)]


@dataclass(frozen=True)
class CouplingKernel:
    """Row-stochastic matrix over pairs: the coupling's transition law."""

    space: StateSpace
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = self.space.n
        if len(self.rows) != n * n:
            raise SpaceMismatch(f"kernel: expected {n * n} rows, got {len(self.rows)}")
        labels = pair_labels(self.space)
        rows = tuple(
            _validated_probs(row, n * n, f"kernel row {labels[i]}")
            for i, row in enumerate(self.rows)
        )
        object.__setattr__(self, "rows", rows)

    def prob(self, u: str, v: str, x: str, y: str) -> Fraction:
        return self.rows[pair_index(self.space, u, v)][pair_index(self.space, x, y)]

    def row_joint(self, u: str, v: str) -> JointDist:
        """The row for source pair (u, v), viewed as a joint distribution."""
        return JointDist(self.space, self.rows[pair_index(self.space, u, v)])


def make_joint(space: StateSpace, probs) -> JointDist:
    return JointDist(space, tuple(probs))


def make_kernel(space: StateSpace, rows) -> CouplingKernel:
    return CouplingKernel(space, tuple(tuple(row) for row in rows))


def joint_delta(space: StateSpace, u: str, v: str) -> JointDist:
    """Point mass on the pair (u, v)."""
    k = pair_index(space, u, v)
    m = space.n * space.n
    return JointDist(space, tuple(ONE if i == k else ZERO for i in range(m)))


def marginal_x(joint: JointDist) -> Dist:
    """First-coordinate marginal: sums each row block of the pair vector."""
    n = joint.space.n
    return Dist(
        joint.space,
        tuple(sum(joint.probs[u * n : (u + 1) * n], ZERO) for u in range(n)),
    )


def marginal_y(joint: JointDist) -> Dist:
    """Second-coordinate marginal."""
    n = joint.space.n
    return Dist(
        joint.space,
        tuple(sum((joint.probs[u * n + v] for u in range(n)), ZERO) for v in range(n)),
    )


def product_joint(a: Dist, b: Dist) -> JointDist:
    """Independent joint distribution: probability of (u, v) is a(u) * b(v)."""
    require_same_space(a.space, b.space)
    return JointDist(a.space, tuple(p * q for p in a.probs for q in b.probs))


def evolve_joint(joint: JointDist, kernel: CouplingKernel) -> JointDist:
    """One exact step of the pair process under the kernel."""
    require_same_space(joint.space, kernel.space)
    m = joint.space.n ** 2
    out = [ZERO] * m
    for w, p in enumerate(joint.probs):
        if p:
            row = kernel.rows[w]
            for w2 in range(m):
                if row[w2]:
                    out[w2] += p * row[w2]
    return JointDist(joint.space, tuple(out))


@dataclass(frozen=True)
class Violation:
    """One exact check failure: where it happened and both sides of the equality.

    ``row`` is the source pair for kernel-row checks (for the point-mass
    condition it is (s, s)); ``step`` is the time index for evolution
    checks; ``side`` says which marginal ("x" or "y"); ``target`` is the
    destination state whose probability is off.
    """

    expected: Fraction
    actual: Fraction
    row: tuple[str, str] | None = None
    side: str | None = None
    target: str | None = None
    step: int | None = None

    def describe(self) -> str:
        parts = []
        if self.row is not None:
            parts.append(f"row ({self.row[0]},{self.row[1]})")
        if self.step is not None:
            parts.append(f"step {self.step}")
        if self.side is not None:
            parts.append(f"side {self.side}")
        if self.target is not None:
            parts.append(f"target {self.target}")
        where = " ".join(parts) or "value"
        return f"{where}: expected {self.expected}, actual {self.actual}"


@dataclass(frozen=True)
class CheckReport:
    """Verdict plus the full list of violations (empty iff verdict is true)."""

    verdict: bool
    violations: tuple[Violation, ...]

    def __post_init__(self):
        object.__setattr__(self, "violations", tuple(self.violations))
        if self.verdict != (len(self.violations) == 0):
            raise ValueError("verdict must be true exactly when there are no violations")


def _report(violations) -> CheckReport:
    vs = tuple(violations)
    return CheckReport(not vs, vs)


def check_faithful(kernel: CouplingKernel, matrix: StochMatrix) -> CheckReport:
    """Check both per-row sum conditions of a faithful coupling.

    For every source pair (u, v) and every destination state, the kernel
    row summed over the other coordinate must reproduce the corresponding
    chain row exactly: sum_y Q((u,v),(x,y)) = P(u,x) and
    sum_x Q((u,v),(x,y)) = P(v,y). Implemented as a direct scan over raw
    entries, with no shared code with check_strong_markovian.
    """
    require_same_space(kernel.space, matrix.space)
    space = kernel.space
    n = space.n
    violations = []
    for u in range(n):
        for v in range(n):
            row = kernel.rows[u * n + v]
            src = (space.labels[u], space.labels[v])
            for x in range(n):
                got = sum((row[x * n + y] for y in range(n)), ZERO)
                want = matrix.rows[u][x]
                if got != want:
                    violations.append(
                        Violation(want, got, row=src, side="x", target=space.labels[x])
                    )
            for y in range(n):
                got = sum((row[x * n + y] for x in range(n)), ZERO)
                want = matrix.rows[v][y]
                if got != want:
                    violations.append(
                        Violation(want, got, row=src, side="y", target=space.labels[y])
                    )
    return _report(violations)


def check_strong_markovian(kernel: CouplingKernel, matrix: StochMatrix) -> CheckReport:
    """Check that one kernel step maps any joint law of (mu, nu) to one of (mu P, nu P).

    Only point masses need checking: every joint distribution is a convex
    combination of pair point masses and the map from a joint distribution
    to its image under the kernel is linear, so marginal correctness on
    each kernel row certifies the universally quantified property. The
    computation goes through joint evolution and marginal extraction,
    deliberately sharing nothing with check_faithful's entry scan.
    """
    require_same_space(kernel.space, matrix.space)
    space = kernel.space
    violations = []
    for u in space.labels:
        for v in space.labels:
            image = evolve_joint(joint_delta(space, u, v), kernel)
            for side, got, want in (
                ("x", marginal_x(image), matrix.row(u)),
                ("y", marginal_y(image), matrix.row(v)),
            ):
                for t, label in enumerate(space.labels):
                    if got.probs[t] != want.probs[t]:
                        violations.append(
                            Violation(
                                want.probs[t], got.probs[t], row=(u, v), side=side, target=label
                            )
                        )
    return _report(violations)


def check_markovian_for(
    kernel: CouplingKernel,
    matrix: StochMatrix,
    initial_joint: JointDist,
    horizon: int,
) -> CheckReport:
    """Check Markovian evolution from one specific initial joint distribution.

    Iterates the joint law under the kernel and compares both marginals
    against the chain-evolved marginals of the initial joint, exactly, at
    every step 1..horizon. A true verdict certifies the property up to the
    given horizon only.
    """
    require_same_space(kernel.space, matrix.space)
    require_same_space(kernel.space, initial_joint.space)
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    space = kernel.space
    mu = marginal_x(initial_joint)
    nu = marginal_y(initial_joint)
    joint = initial_joint
    violations = []
    for i in range(1, horizon + 1):
        joint = evolve_joint(joint, kernel)
        mu = evolve(mu, matrix)
        nu = evolve(nu, matrix)
        for side, got, want in (("x", marginal_x(joint), mu), ("y", marginal_y(joint), nu)):
            for t, label in enumerate(space.labels):
                if got.probs[t] != want.probs[t]:
                    violations.append(
                        Violation(want.probs[t], got.probs[t], side=side, target=label, step=i)
                    )
    return _report(violations)


def check_proposition_condition(
    kernel: CouplingKernel, matrix: StochMatrix, horizon: int
) -> CheckReport:
    """Check the point-mass restart condition needed for sticking.

    For every state s, start the pair process at the point mass on (s, s)
    and verify that after i steps both marginals equal the chain law
    started at s, for i = 1..horizon. Violations carry the start pair
    (s, s), the step, the marginal side and the target state.
    """
    require_same_space(kernel.space, matrix.space)
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    space = kernel.space
    violations = []
    for s in space.labels:
        joint = joint_delta(space, s, s)
        expected = matrix.row(s)
        for i in range(1, horizon + 1):
            joint = evolve_joint(joint, kernel)
            for side, got in (("x", marginal_x(joint)), ("y", marginal_y(joint))):
                for t, label in enumerate(space.labels):
                    if got.probs[t] != expected.probs[t]:
                        violations.append(
                            Violation(
                                expected.probs[t],
                                got.probs[t],
                                row=(s, s),
                                side=side,
                                target=label,
                                step=i,
                            )
                        )
            if i < horizon:
                expected = evolve(expected, matrix)
    return _report(violations)


def independent_coupling(matrix: StochMatrix) -> CouplingKernel:
    """Couple the two coordinates independently: Q((u,v),(x,y)) = P(u,x) P(v,y)."""
    space = matrix.space
    n = space.n
    rows = []
    for u in range(n):
        for v in range(n):
            pu, pv = matrix.rows[u], matrix.rows[v]
            rows.append(tuple(pu[x] * pv[y] for x in range(n) for y in range(n)))
    return CouplingKernel(space, tuple(rows))


def greedy_maximal_coupling(matrix: StochMatrix) -> CouplingKernel:
    """One-step maximal coupling of each pair of chain rows.

    Each row pair gets the overlap min(P(u,x), P(v,x)) on the diagonal,
    which makes the one-step meeting probability from (u, v) equal to one
    minus the total variation distance of the two rows. The leftover mass
    is spread as the normalized product of the two residuals, which keeps
    everything rational and row-stochastic.
    """
    space = matrix.space
    n = space.n
    rows = []
    for u in range(n):
        for v in range(n):
            pu, pv = matrix.rows[u], matrix.rows[v]
            overlap = [min(a, b) for a, b in zip(pu, pv)]
            r1 = [a - o for a, o in zip(pu, overlap)]
            r2 = [b - o for b, o in zip(pv, overlap)]
            residual = sum(r1, ZERO)
            row = [ZERO] * (n * n)
            for x in range(n):
                if overlap[x]:
                    row[x * n + x] = overlap[x]
            if residual:
                for x in range(n):
                    if r1[x]:
                        for y in range(n):
                            if y != x and r2[y]:
                                row[x * n + y] = r1[x] * r2[y] / residual
            rows.append(tuple(row))
    return CouplingKernel(space, tuple(rows))


def make_sticky_kernel(kernel: CouplingKernel, matrix: StochMatrix) -> CouplingKernel:
    """Replace every diagonal row so the coordinates move together after meeting.

    Row (s, s) becomes P(s, t) on pair (t, t) and zero off the diagonal.
    Faithfulness is preserved, and any chain run under the result has the
    now-equals-forever property by construction. Idempotent.
    """
    require_same_space(kernel.space, matrix.space)
    space = kernel.space
    n = space.n
    rows = list(kernel.rows)
    for s in range(n):
        row = [ZERO] * (n * n)
        for t in range(n):
            row[t * n + t] = matrix.rows[s][t]
        rows[s * n + s] = tuple(row)
    return CouplingKernel(space, tuple(rows))


class RosenthalFixture(NamedTuple):
    """The classic two-state counterexample: chain, xor kernel, two joint starts."""

    chain: StochMatrix
    kernel: CouplingKernel
    uniform_joint: JointDist
    skewed_joint: JointDist


def rosenthal_fixture() -> RosenthalFixture:
    """Rosenthal's counterexample, exactly as usually tabulated.

    The chain on {0, 1} moves to the uniform distribution in one step. The
    kernel advances the first coordinate deterministically to the xor of
    the current pair while the second stays uniform. Under the uniform
    joint start the pair law is invariant; under the skewed start the
    first coordinate stops evolving by the chain after one step.
    """
    space = StateSpace(("0", "1"))
    half = Fraction(1, 2)
    chain = StochMatrix(space, ((half, half), (half, half)))
    kernel = CouplingKernel(
        space,
        (
            (half, half, ZERO, ZERO),  # from (0,0): x' = 0, y' uniform
            (ZERO, ZERO, half, half),  # from (0,1): x' = 1, y' uniform
            (ZERO, ZERO, half, half),  # from (1,0): x' = 1, y' uniform
            (half, half, ZERO, ZERO),  # from (1,1): x' = 0, y' uniform
        ),
    )
    quarter = Fraction(1, 4)
    uniform_joint = JointDist(space, (quarter,) * 4)
    eighth = Fraction(1, 8)
    skewed_joint = JointDist(space, (3 * eighth, eighth, eighth, 3 * eighth))
    return RosenthalFixture(chain, kernel, uniform_joint, skewed_joint)
