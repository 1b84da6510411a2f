import json
import math
from pathlib import Path
from typing import Any, Callable, TypeVar

import numpy as np

from constants import HERMITIAN_TOL
from exceptions import MalformedJsonException
from linalg_core import HermitianMatrix
from moments import GridDistribution, WaveFunction
from phasespace import GeneratingOperator
from povm import DiscretePOVM, JointPOVM, StochasticMatrix

T = TypeVar("T")


def _decoding(kind: str, decoder: Callable[[Any], T], data: Any) -> T:
    try:
        return decoder(data)
    except (AttributeError, KeyError, TypeError, ValueError, IndexError) as e:
        raise MalformedJsonException(f"Cannot read {kind}: {e}")


def _floats(values: Any) -> list[float]:
    result: list[float] = [float(value) for value in values]
    if not all(math.isfinite(value) for value in result):
        raise ValueError("non-finite number")
    return result


def _label(label: Any) -> Any:
    # JSON has no tuples
    return list(label) if isinstance(label, tuple) else label


def _label_key(label: Any) -> Any:
    return tuple(label) if isinstance(label, list) else label


def encode_matrix(matrix: HermitianMatrix) -> dict[str, Any]:
    return {
        "dim": matrix.dim,
        "re": matrix.array.real.tolist(),
        "im": matrix.array.imag.tolist(),
    }


def decode_matrix(data: Any, tol: float = HERMITIAN_TOL) -> HermitianMatrix:
    def decode(value: dict[str, Any]) -> HermitianMatrix:
        dim: int = int(value["dim"])
        real: np.ndarray = np.array([_floats(row) for row in value["re"]])
        imaginary: np.ndarray = np.array([_floats(row) for row in value.get("im", np.zeros((dim, dim)).tolist())])
        if real.shape != (dim, dim) or imaginary.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} entries")
        return HermitianMatrix(real + 1j * imaginary, tol)

    return _decoding("matrix", decode, data)


def encode_povm(povm: DiscretePOVM) -> dict[str, Any]:
    return {
        "labels": [_label(label) for label in povm.labels],
        "effects": [encode_matrix(operator) for operator in povm.operators],
    }


def decode_povm(data: Any, tol: float = HERMITIAN_TOL) -> DiscretePOVM:
    def decode(value: dict[str, Any]) -> DiscretePOVM:
        labels: list[Any] = [_label_key(label) for label in value["labels"]]
        return DiscretePOVM(labels, [decode_matrix(effect, tol) for effect in value["effects"]])

    return _decoding("observable", decode, data)


def encode_joint(joint: JointPOVM) -> dict[str, Any]:
    return {
        "row_labels": [_label(label) for label in joint.row_labels],
        "col_labels": [_label(label) for label in joint.col_labels],
        "effects": [[encode_matrix(operator) for operator in row] for row in joint.operators],
    }


def decode_joint(data: Any) -> JointPOVM:
    def decode(value: dict[str, Any]) -> JointPOVM:
        return JointPOVM(
            [_label_key(label) for label in value["row_labels"]],
            [_label_key(label) for label in value["col_labels"]],
            [[decode_matrix(effect) for effect in row] for row in value["effects"]],
        )

    return _decoding("joint observable", decode, data)


def encode_stochastic(matrix: StochasticMatrix) -> dict[str, Any]:
    return {"rows": matrix.rows, "cols": matrix.cols, "entries": matrix.entries.tolist()}


def decode_stochastic(data: Any) -> StochasticMatrix:
    def decode(value: dict[str, Any]) -> StochasticMatrix:
        entries: np.ndarray = np.array([_floats(row) for row in value["entries"]])
        if entries.shape != (int(value["rows"]), int(value["cols"])):
            raise ValueError(f"entries have shape {entries.shape}")
        return StochasticMatrix(entries)

    return _decoding("stochastic matrix", decode, data)


def encode_distribution(distribution: GridDistribution) -> dict[str, Any]:
    return {"x0": distribution.x0, "dx": distribution.dx, "weights": distribution.weights.tolist()}


def decode_distribution(data: Any) -> GridDistribution:
    def decode(value: dict[str, Any]) -> GridDistribution:
        return GridDistribution(float(value["x0"]), float(value["dx"]), _floats(value["weights"]))

    return _decoding("distribution", decode, data)


def encode_wavefunction(wave: WaveFunction) -> dict[str, Any]:
    return {
        "x0": wave.x0,
        "dx": wave.dx,
        "re": wave.amplitudes.real.tolist(),
        "im": wave.amplitudes.imag.tolist(),
    }


def decode_wavefunction(data: Any) -> WaveFunction:
    def decode(value: dict[str, Any]) -> WaveFunction:
        real: list[float] = _floats(value["re"])
        imaginary: list[float] = _floats(value.get("im", [0.0] * len(real)))
        if len(real) != len(imaginary):
            raise ValueError("re and im differ in length")
        return WaveFunction(float(value["x0"]), float(value["dx"]), np.array(real) + 1j * np.array(imaginary))

    return _decoding("wave function", decode, data)


def encode_generator(generator: GeneratingOperator) -> dict[str, Any]:
    return {
        "weights": generator.weights.tolist(),
        "components": [encode_wavefunction(component) for component in generator.components],
    }


def decode_generator(data: Any) -> GeneratingOperator:
    def decode(value: dict[str, Any]) -> GeneratingOperator:
        return GeneratingOperator(
            _floats(value["weights"]), [decode_wavefunction(component) for component in value["components"]]
        )

    return _decoding("generating operator", decode, data)


def load_json(path: str) -> Any:
    """
    Read a JSON document, mapping unreadable or unparsable files to MalformedJsonException.
    """
    try:
        with open(Path(path), "r", encoding="utf-8") as file:
            return json.load(file)
    except (OSError, json.JSONDecodeError) as e:
        raise MalformedJsonException(f"{path}: {e}")


def dumps(report: Any) -> str:
    """
    Deterministic serialization: sorted keys, shortest round-trip float representation.
    """
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False)
