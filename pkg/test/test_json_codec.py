import json
from pathlib import Path

import numpy as np
import pytest

from exceptions import InvalidDistributionException, MalformedJsonException, NotHermitianException
from json_codec import (
    decode_distribution,
    decode_generator,
    decode_joint,
    decode_matrix,
    decode_povm,
    decode_stochastic,
    dumps,
    encode_distribution,
    encode_generator,
    encode_joint,
    encode_matrix,
    encode_povm,
    encode_stochastic,
    load_json,
)
from linalg_core import HermitianMatrix, pauli
from moments import Grid, point_mass
from phasespace import GeneratingOperator, gaussian_generator
from povm import DiscretePOVM, JointPOVM, StochasticMatrix, povm_distance
from qubit_models import build_spin_joint, sharp_spin


def test_matrix_layout() -> None:
    data: dict = encode_matrix(pauli(2))
    assert data == {"dim": 2, "re": [[0.0, 0.0], [0.0, 0.0]], "im": [[0.0, -1.0], [1.0, 0.0]]}
    assert np.array_equal(decode_matrix(data).array, pauli(2).array)


def test_matrix_without_imaginary_part() -> None:
    matrix: HermitianMatrix = decode_matrix({"dim": 2, "re": [[1.0, 0.5], [0.5, 0.0]]})
    assert matrix.array[0, 1] == 0.5


@pytest.mark.parametrize(
    "data",
    [
        None,
        [],
        {"re": [[1.0]]},
        {"dim": 2, "re": [[1.0, 0.0]]},
        {"dim": 1, "re": [["x"]]},
        {"dim": 1, "re": [[float("nan")]]},
    ],
)
def test_malformed_matrix(data: object) -> None:
    with pytest.raises(MalformedJsonException):
        decode_matrix(data)


def test_non_hermitian_matrix_keeps_its_error() -> None:
    with pytest.raises(NotHermitianException):
        decode_matrix({"dim": 2, "re": [[1.0, 1.0], [0.0, 1.0]]})


def test_joint_labels_survive() -> None:
    joint: JointPOVM = build_spin_joint()
    decoded: JointPOVM = decode_joint(json.loads(dumps(encode_joint(joint))))
    assert decoded.row_labels == joint.row_labels
    assert povm_distance(decoded.flatten(), joint.flatten()) < 1e-15
    assert decoded.flatten().labels[0] == ("+", "+")


def test_povm_and_stochastic() -> None:
    povm: DiscretePOVM = decode_povm(json.loads(dumps(encode_povm(sharp_spin([0.0, 1.0, 0.0])))))
    assert povm.labels == ("+", "-")
    stochastic: StochasticMatrix = decode_stochastic(encode_stochastic(StochasticMatrix.symmetric_binary(0.2)))
    np.testing.assert_allclose(stochastic.entries, [[0.6, 0.4], [0.4, 0.6]], atol=1e-15)
    with pytest.raises(MalformedJsonException):
        decode_stochastic({"rows": 3, "cols": 2, "entries": [[0.5, 0.5], [0.5, 0.5]]})


def test_distribution_validation() -> None:
    assert decode_distribution(encode_distribution(point_mass(1.5, 0.25))).x0 == 1.5
    with pytest.raises(InvalidDistributionException):
        decode_distribution({"x0": 0.0, "dx": 1.0, "weights": [0.2, 0.2]})


def test_generator(small_grid: Grid) -> None:
    generator: GeneratingOperator = gaussian_generator(1.0, small_grid)
    decoded: GeneratingOperator = decode_generator(json.loads(dumps(encode_generator(generator))))
    assert len(decoded) == 1
    assert decoded.components[0].x0 == generator.components[0].x0


def test_dumps_is_deterministic() -> None:
    assert dumps({"b": 1, "a": 0.1}) == '{\n  "a": 0.1,\n  "b": 1\n}'
    with pytest.raises(ValueError):
        dumps({"value": float("inf")})


def test_load_json(tmp_path: Path) -> None:
    good: Path = tmp_path.joinpath("good.json")
    good.write_text('{"A": 1}', encoding="utf-8")
    assert load_json(str(good)) == {"A": 1}
    bad: Path = tmp_path.joinpath("bad.json")
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(MalformedJsonException):
        load_json(str(bad))
    with pytest.raises(MalformedJsonException):
        load_json(str(tmp_path.joinpath("missing.json")))
