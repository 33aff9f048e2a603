from fractions import Fraction as F

import pytest
from hypothesis import given
import hypothesis.strategies as st

from coupling_lab import (
    ParseError,
    StateSpace,
    SumNotOne,
    rosenthal_fixture,
    stuck_path_distribution,
    uniform_dist,
)
from coupling_lab import fileio
import strategies

TWO = StateSpace(("0", "1"))


def test_rational_text_round_trip():
    assert fileio.rat_to_text(F(3, 8)) == "3/8"
    assert fileio.rat_to_text(F(2)) == "2"
    assert fileio.rat_from_text("3/8") == F(3, 8)
    assert fileio.rat_from_text("2") == F(2)


def test_rational_text_rejects_non_strings_and_garbage():
    with pytest.raises(ParseError):
        fileio.rat_from_text(0.5)
    with pytest.raises(ParseError):
        fileio.rat_from_text("1/0")
    with pytest.raises(ParseError):
        fileio.rat_from_text("pi")


def test_chain_file_round_trip(tmp_path):
    chain = rosenthal_fixture().chain
    path = tmp_path / "chain.json"
    fileio.dump_chain(chain, path)
    loaded = fileio.load_chain(path)
    assert loaded == chain
    # canonical text is stable under a parse/serialize cycle
    text = path.read_text()
    fileio.dump_chain(loaded, path)
    assert path.read_text() == text


def test_kernel_file_round_trip(tmp_path):
    kernel = rosenthal_fixture().kernel
    path = tmp_path / "kernel.json"
    fileio.dump_kernel(kernel, path)
    assert fileio.load_kernel(path) == kernel


def test_joint_file_round_trip(tmp_path):
    joint = rosenthal_fixture().skewed_joint
    path = tmp_path / "joint.json"
    fileio.dump_joint(joint, path)
    assert fileio.load_joint(path) == joint


@given(st.data())
def test_jsonable_round_trips_random_instances(data):
    matrix = data.draw(strategies.stoch_matrices())
    assert fileio.chain_from_jsonable(fileio.chain_to_jsonable(matrix)) == matrix
    joint = data.draw(strategies.joint_dists(space=matrix.space))
    assert fileio.joint_from_jsonable(fileio.joint_to_jsonable(joint)) == joint
    kernel = data.draw(strategies.random_pair_kernels(space=matrix.space))
    assert fileio.kernel_from_jsonable(fileio.kernel_to_jsonable(kernel)) == kernel


def test_structural_parse_errors():
    with pytest.raises(ParseError):
        fileio.chain_from_jsonable({"states": "01", "P": []})
    with pytest.raises(ParseError):
        fileio.chain_from_jsonable({"states": ["0", "1"], "P": [["1/2", "1/2"]]})
    with pytest.raises(ParseError):
        fileio.chain_from_jsonable({"states": ["0", "1"], "P": [["1/2"], ["1"]]})
    with pytest.raises(ParseError):
        fileio.joint_from_jsonable({"states": ["0", "1"], "theta": ["1/4"] * 3})
    # JSON numbers are rejected: exact quantities travel as strings
    with pytest.raises(ParseError):
        fileio.chain_from_jsonable({"states": ["0", "1"], "P": [[0.5, 0.5], [0.5, 0.5]]})


def test_validation_errors_surface_on_load():
    with pytest.raises(SumNotOne):
        fileio.chain_from_jsonable({"states": ["0", "1"], "P": [["1/2", "1/4"], ["1", "0"]]})


def test_invalid_json_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        fileio.load_chain(path)
    path.write_text("[1, 2, 3]")
    with pytest.raises(ParseError):
        fileio.load_chain(path)


def test_path_law_serialization_uses_comma_joined_keys():
    _, kernel, uniform_joint, _ = rosenthal_fixture()
    law = stuck_path_distribution(kernel, uniform_joint, 1)
    obj = fileio.path_dist_to_jsonable(law)
    assert obj == {"0,0": "1/8", "0,1": "3/8", "1,0": "1/8", "1,1": "3/8"}
    assert fileio.path_dist_from_jsonable(TWO, obj) == law


def test_path_law_parse_errors():
    with pytest.raises(ParseError):
        fileio.path_dist_from_jsonable(TWO, {})
    with pytest.raises(ParseError):
        fileio.path_dist_from_jsonable(TWO, {"0": "1/2", "0,1": "1/2"})
    with pytest.raises(ParseError):
        fileio.path_dist_from_jsonable(TWO, {"0": "1/2", "1": "1/4"})


def test_duplicate_states_rejected():
    with pytest.raises(ParseError):
        fileio.chain_from_jsonable({"states": ["0", "0"], "P": [["1", "0"], ["0", "1"]]})
