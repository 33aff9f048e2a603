from fractions import Fraction as F

import pytest
from hypothesis import given
import hypothesis.strategies as st

from coupling_lab import (
    Dist,
    NegativeEntry,
    SpaceMismatch,
    StateSpace,
    StochMatrix,
    SumNotOne,
    UnknownState,
    as_rat,
    delta,
    evolve,
    evolve_n,
    make_dist,
    make_stoch_matrix,
    rosenthal_fixture,
    tv_distance,
    uniform_dist,
)
import oracles
import strategies

TWO = StateSpace(("0", "1"))
ABC = StateSpace(("a", "b", "c"))

CYCLE3 = make_stoch_matrix(
    ABC,
    ((0, 1, 0), (0, 0, 1), (1, 0, 0)),
)

IDENTITY2 = make_stoch_matrix(TWO, ((1, 0), (0, 1)))


def test_make_dist_uniform():
    d = make_dist(TWO, (F(1, 2), F(1, 2)))
    assert d.probs == (F(1, 2), F(1, 2))


def test_make_dist_point_mass():
    assert make_dist(TWO, (1, 0)).probs == (F(1), F(0))


def test_make_dist_reports_exact_deficit():
    with pytest.raises(SumNotOne) as err:
        make_dist(TWO, (F(1, 2), F(1, 3)))
    assert err.value.deficit == F(1, 6)


def test_make_dist_negative_entry():
    with pytest.raises(NegativeEntry):
        make_dist(TWO, (F(3, 2), F(-1, 2)))


def test_make_dist_wrong_length():
    with pytest.raises(SpaceMismatch):
        make_dist(TWO, (F(1),))


def test_make_dist_rejects_floats():
    with pytest.raises(TypeError):
        make_dist(TWO, (0.5, 0.5))
    with pytest.raises(TypeError):
        as_rat(0.25)


def test_delta():
    assert delta(TWO, "0").probs == (F(1), F(0))
    assert delta(TWO, "1").probs == (F(0), F(1))
    assert delta(ABC, "b").probs == (F(0), F(1), F(0))


def test_delta_unknown_state():
    with pytest.raises(UnknownState):
        delta(TWO, "z")


def test_state_space_rejects_duplicates_and_commas():
    with pytest.raises(ValueError):
        StateSpace(("x", "x"))
    with pytest.raises(ValueError):
        StateSpace(("a,b",))


def test_matrix_row_validation():
    with pytest.raises(SumNotOne):
        make_stoch_matrix(TWO, ((F(1, 2), F(1, 4)), (0, 1)))


@given(st.integers(0, 64))
def test_evolve_maps_everything_to_uniform_on_rosenthal(k):
    chain = rosenthal_fixture().chain
    d = make_dist(TWO, (F(k, 64), F(64 - k, 64)))
    assert evolve(d, chain).probs == (F(1, 2), F(1, 2))


@given(strategies.dists(space=TWO))
def test_evolve_identity_fixes_everything(d):
    assert evolve(d, IDENTITY2) == d


def test_evolve_permutation_cycle():
    assert evolve(delta(ABC, "a"), CYCLE3) == delta(ABC, "b")


def test_evolve_space_mismatch():
    with pytest.raises(SpaceMismatch):
        evolve(uniform_dist(TWO), CYCLE3)


def test_evolve_n_rosenthal_reaches_uniform():
    chain = rosenthal_fixture().chain
    assert evolve_n(delta(TWO, "0"), chain, 5) == uniform_dist(TWO)


@given(strategies.dists())
def test_evolve_n_zero_steps_is_identity(d):
    matrix = make_stoch_matrix(d.space, tuple(uniform_dist(d.space).probs for _ in d.space.labels))
    assert evolve_n(d, matrix, 0) == d


def test_evolve_n_cycle_period_three():
    assert evolve_n(delta(ABC, "a"), CYCLE3, 3) == delta(ABC, "a")


def test_tv_distance_frozen_value():
    a = make_dist(TWO, (F(3, 4), F(1, 4)))
    b = uniform_dist(TWO)
    assert tv_distance(a, b) == F(1, 4)
    assert tv_distance(a, b) == oracles.tv_half_l1(a.probs, b.probs)


@given(strategies.dists())
def test_tv_distance_self_is_zero(d):
    assert tv_distance(d, d) == 0


def test_tv_distance_disjoint_supports():
    assert tv_distance(delta(TWO, "0"), delta(TWO, "1")) == 1


@given(st.data())
def test_tv_distance_symmetric_and_bounded(data):
    space = data.draw(strategies.spaces)
    a = data.draw(strategies.dists(space=space))
    b = data.draw(strategies.dists(space=space))
    d = tv_distance(a, b)
    assert d == tv_distance(b, a)
    assert 0 <= d <= 1
    assert (d == 0) == (a == b)


@given(st.data())
def test_evolution_preserves_validity(data):
    space = data.draw(strategies.spaces)
    d = data.draw(strategies.dists(space=space))
    m = data.draw(strategies.stoch_matrices(space=space))
    out = evolve(d, m)
    assert sum(out.probs) == 1
    assert all(p >= 0 for p in out.probs)


@given(st.data(), st.integers(0, 8), st.integers(0, 8))
def test_evolve_n_is_additive(data, s, t):
    space = data.draw(strategies.spaces)
    d = data.draw(strategies.dists(space=space))
    m = data.draw(strategies.stoch_matrices(space=space))
    assert evolve_n(d, m, s + t) == evolve_n(evolve_n(d, m, s), m, t)


@given(st.data())
def test_tv_triangle_inequality(data):
    space = data.draw(strategies.spaces)
    a = data.draw(strategies.dists(space=space))
    b = data.draw(strategies.dists(space=space))
    c = data.draw(strategies.dists(space=space))
    assert tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c)


@given(st.data())
def test_evolution_contracts_tv(data):
    space = data.draw(strategies.spaces)
    a = data.draw(strategies.dists(space=space))
    b = data.draw(strategies.dists(space=space))
    m = data.draw(strategies.stoch_matrices(space=space))
    assert tv_distance(evolve(a, m), evolve(b, m)) <= tv_distance(a, b)


def test_dist_prob_lookup_and_support():
    d = make_dist(ABC, (F(1, 2), 0, F(1, 2)))
    assert d.prob("a") == F(1, 2)
    assert d.support() == ("a", "c")


def test_matrix_row_as_dist():
    chain = rosenthal_fixture().chain
    row = chain.row("0")
    assert isinstance(row, Dist)
    assert row == uniform_dist(TWO)
    assert chain.prob("0", "1") == F(1, 2)
