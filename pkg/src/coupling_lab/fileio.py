"""JSON file formats for chains, kernels, joint distributions and path laws.

Probabilities travel as exact rational strings ("3/8", "1"), never as JSON
numbers, and parsing a canonically serialized file reproduces the original
object bit for bit. Pair vectors and kernel axes use the same row-major
(u, v) order as the in-memory types.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .core import StateSpace, StochMatrix
from .errors import ParseError
from .kernels import CouplingKernel, JointDist
from .sticking import PathDist


def rat_to_text(value: Fraction) -> str:
    """Render as "p/q", or bare "k" for integers."""
    return str(value)


def rat_from_text(text) -> Fraction:
    if not isinstance(text, str):
        raise ParseError(f"probabilities must be rational strings, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from None


def _states_from(obj) -> StateSpace:
    states = obj.get("states")
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise ParseError('"states" must be a list of strings')
    try:
        return StateSpace(tuple(states))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _matrix_from(obj, key: str, rows: int, cols: int) -> tuple[tuple[Fraction, ...], ...]:
    raw = obj.get(key)
    if not isinstance(raw, list) or len(raw) != rows:
        raise ParseError(f'"{key}" must be a list of {rows} rows')
    out = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f'"{key}" row {i} must have {cols} entries')
        out.append(tuple(rat_from_text(x) for x in row))
    return tuple(out)


def chain_to_jsonable(matrix: StochMatrix) -> dict:
    return {
        "states": list(matrix.space.labels),
        "P": [[rat_to_text(p) for p in row] for row in matrix.rows],
    }


def chain_from_jsonable(obj) -> StochMatrix:
    space = _states_from(obj)
    return StochMatrix(space, _matrix_from(obj, "P", space.n, space.n))


def kernel_to_jsonable(kernel: CouplingKernel) -> dict:
    return {
        "states": list(kernel.space.labels),
        "Q": [[rat_to_text(p) for p in row] for row in kernel.rows],
    }


def kernel_from_jsonable(obj) -> CouplingKernel:
    space = _states_from(obj)
    m = space.n ** 2
    return CouplingKernel(space, _matrix_from(obj, "Q", m, m))


def joint_to_jsonable(joint: JointDist) -> dict:
    return {
        "states": list(joint.space.labels),
        "theta": [rat_to_text(p) for p in joint.probs],
    }


def joint_from_jsonable(obj) -> JointDist:
    space = _states_from(obj)
    raw = obj.get("theta")
    m = space.n ** 2
    if not isinstance(raw, list) or len(raw) != m:
        raise ParseError(f'"theta" must be a list of {m} rational strings')
    return JointDist(space, tuple(rat_from_text(x) for x in raw))


def path_dist_to_jsonable(law: PathDist) -> dict:
    """Map from comma-joined state labels to rational strings, in path order."""
    index = law.space.index
    ordered = sorted(law.probs, key=lambda path: tuple(index(l) for l in path))
    return {",".join(path): rat_to_text(law.probs[path]) for path in ordered}


def path_dist_from_jsonable(space: StateSpace, obj) -> PathDist:
    if not isinstance(obj, dict) or not obj:
        raise ParseError("path law must be a non-empty JSON object")
    probs = {}
    lengths = set()
    for key, text in obj.items():
        path = tuple(key.split(","))
        lengths.add(len(path))
        probs[path] = rat_from_text(text)
    if len(lengths) != 1:
        raise ParseError(f"path keys have mixed lengths {sorted(lengths)}")
    try:
        return PathDist(space, lengths.pop() - 1, probs)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _serialize(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: top level must be a JSON object")
    return obj


def load_chain(path: str) -> StochMatrix:
    return chain_from_jsonable(_load_json(path))


def dump_chain(matrix: StochMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_serialize(chain_to_jsonable(matrix)))


def load_kernel(path: str) -> CouplingKernel:
    return kernel_from_jsonable(_load_json(path))


def dump_kernel(kernel: CouplingKernel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_serialize(kernel_to_jsonable(kernel)))


def load_joint(path: str) -> JointDist:
    return joint_from_jsonable(_load_json(path))


def dump_joint(joint: JointDist, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_serialize(joint_to_jsonable(joint)))
