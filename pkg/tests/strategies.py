"""Hypothesis strategies for exact random instances.

Weights are dyadic (denominator dividing 64) so probabilities stay exact
and denominators never blow up over the short horizons the tests use.
"""

from fractions import Fraction

import hypothesis.strategies as st

from coupling_lab import (
    CouplingKernel,
    Dist,
    JointDist,
    StateSpace,
    StochMatrix,
    greedy_maximal_coupling,
    independent_coupling,
    make_sticky_kernel,
)
from coupling_lab.randgen import mix_kernels

RESOLUTION = 64

TWO = StateSpace(("0", "1"))
THREE = StateSpace(("a", "b", "c"))

spaces = st.sampled_from((TWO, THREE))


@st.composite
def weights(draw, parts, resolution=RESOLUTION):
    cuts = sorted(
        draw(st.lists(st.integers(0, resolution), min_size=parts - 1, max_size=parts - 1))
    )
    bounds = [0] + cuts + [resolution]
    return tuple(Fraction(b - a, resolution) for a, b in zip(bounds, bounds[1:]))


@st.composite
def dists(draw, space=None):
    space = space or draw(spaces)
    return Dist(space, draw(weights(space.n)))


@st.composite
def stoch_matrices(draw, space=None):
    space = space or draw(spaces)
    return StochMatrix(space, tuple(draw(weights(space.n)) for _ in range(space.n)))


@st.composite
def joint_dists(draw, space=None):
    space = space or draw(spaces)
    return JointDist(space, draw(weights(space.n ** 2)))


@st.composite
def random_pair_kernels(draw, space=None):
    space = space or draw(spaces)
    m = space.n ** 2
    return CouplingKernel(space, tuple(draw(weights(m)) for _ in range(m)))


@st.composite
def faithful_setups(draw, space=None):
    """A (kernel, matrix) pair where the kernel is faithful by construction."""
    space = space or draw(spaces)
    matrix = draw(stoch_matrices(space=space))
    kind = draw(st.sampled_from(("independent", "greedy", "sticky", "mix")))
    if kind == "independent":
        kernel = independent_coupling(matrix)
    elif kind == "greedy":
        kernel = greedy_maximal_coupling(matrix)
    elif kind == "sticky":
        base = draw(st.sampled_from((independent_coupling, greedy_maximal_coupling)))
        kernel = make_sticky_kernel(base(matrix), matrix)
    else:
        alpha = Fraction(draw(st.integers(0, 16)), 16)
        kernel = mix_kernels(independent_coupling(matrix), greedy_maximal_coupling(matrix), alpha)
    return kernel, matrix


@st.composite
def mixed_setups(draw, space=None):
    """(kernel, matrix) pairs covering both faithful and unstructured kernels."""
    space = space or draw(spaces)
    if draw(st.booleans()):
        return draw(faithful_setups(space=space))
    matrix = draw(stoch_matrices(space=space))
    kernel = draw(random_pair_kernels(space=space))
    return kernel, matrix
