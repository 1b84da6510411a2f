import numpy as np
import pytest

from exceptions import (
    DimensionMismatchException,
    NotDensityStateException,
    NotEffectException,
    NotHermitianException,
    NotPsdException,
)
from linalg_core import (
    DensityState,
    Effect,
    HermitianMatrix,
    QubitBloch,
    bloch_to_matrix,
    commutator_norm,
    eigenvalues,
    eigh,
    frobenius_distance,
    identity,
    is_psd,
    matrix_to_bloch,
    operator_norm,
    pauli,
    random_density_state,
    random_hermitian,
    random_psd,
    spin_projector,
    sqrt_psd,
)


def test_rejects_non_hermitian() -> None:
    with pytest.raises(NotHermitianException):
        HermitianMatrix([[1.0, 2.0], [0.0, 1.0]])


def test_rejects_non_square() -> None:
    with pytest.raises(NotHermitianException):
        HermitianMatrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def test_diagonal_is_exactly_real() -> None:
    matrix: HermitianMatrix = HermitianMatrix([[1.0 + 1e-14j, 0.5j], [-0.5j, 2.0]])
    assert np.all(np.diag(matrix.array).imag == 0.0)


def test_array_is_read_only() -> None:
    matrix: HermitianMatrix = identity(2)
    with pytest.raises(ValueError):
        matrix.array[0, 0] = 5.0


def test_arithmetic() -> None:
    total: HermitianMatrix = pauli(3) + identity(2)
    assert total.trace() == pytest.approx(2.0)
    assert (0.5 * identity(3)).trace() == pytest.approx(1.5)
    with pytest.raises(DimensionMismatchException):
        identity(2) - identity(3)


def test_eigenvalues_ascending() -> None:
    values: np.ndarray = eigenvalues(HermitianMatrix(np.diag([3.0, 1.0, 2.0])))
    assert values.tolist() == pytest.approx([1.0, 2.0, 3.0])


def test_qubit_closed_form_spectrum() -> None:
    bloch: QubitBloch = QubitBloch(0.4, [0.1, -0.2, 0.05])
    values: np.ndarray = eigenvalues(bloch_to_matrix(bloch))
    assert values[0] == pytest.approx(0.4 - bloch.norm, abs=1e-15)
    assert values[1] == pytest.approx(0.4 + bloch.norm, abs=1e-15)


@pytest.mark.parametrize("dim", [3, 4, 6])
def test_jacobi_matches_lapack(rng: np.random.Generator, dim: int) -> None:
    matrix: HermitianMatrix = random_hermitian(rng, dim)
    np.testing.assert_allclose(eigenvalues(matrix), np.linalg.eigvalsh(matrix.array), atol=1e-11)


def test_eigh_reconstructs(rng: np.random.Generator) -> None:
    matrix: HermitianMatrix = random_hermitian(rng, 5)
    values, vectors = eigh(matrix)
    np.testing.assert_allclose((vectors * values) @ vectors.conj().T, matrix.array, atol=1e-11)
    np.testing.assert_allclose(vectors.conj().T @ vectors, np.eye(5), atol=1e-12)


def test_sqrt_psd_squares_back(rng: np.random.Generator) -> None:
    positive: HermitianMatrix = random_psd(rng, 4)
    root: HermitianMatrix = sqrt_psd(positive)
    np.testing.assert_allclose(root.array @ root.array, positive.array, atol=1e-10)
    assert is_psd(root)


def test_sqrt_psd_rejects_negative() -> None:
    with pytest.raises(NotPsdException):
        sqrt_psd(HermitianMatrix(np.diag([-1e-3, 1.0, 1.0])))


def test_sqrt_psd_clamps_round_off() -> None:
    root: HermitianMatrix = sqrt_psd(HermitianMatrix(np.diag([-1e-12, 4.0, 1.0])))
    np.testing.assert_allclose(np.diag(root.array).real, [0.0, 2.0, 1.0], atol=1e-12)


def test_effect_bounds() -> None:
    Effect(np.diag([0.0, 1.0]))
    with pytest.raises(NotEffectException):
        Effect(np.diag([0.5, 1.5]))
    with pytest.raises(NotEffectException):
        Effect(np.diag([-0.1, 0.5]))


def test_density_state() -> None:
    with pytest.raises(NotDensityStateException):
        DensityState(np.diag([0.5, 0.6]))
    with pytest.raises(NotDensityStateException):
        DensityState(np.diag([1.5, -0.5]))
    pure: DensityState = DensityState.pure([1.0, 1.0j])
    np.testing.assert_allclose(pure.array @ pure.array, pure.array, atol=1e-15)


def test_random_density_state(rng: np.random.Generator) -> None:
    state: DensityState = random_density_state(rng, 3)
    assert state.trace() == pytest.approx(1.0, abs=1e-12)
    assert is_psd(state)


def test_bloch_conversion() -> None:
    bloch: QubitBloch = QubitBloch(0.3, [0.1, -0.05, 0.2])
    back: QubitBloch = matrix_to_bloch(bloch_to_matrix(bloch))
    assert back.a0 == pytest.approx(0.3)
    np.testing.assert_allclose(back.a, bloch.a, atol=1e-15)
    assert bloch.is_effect()
    assert not QubitBloch(0.2, [0.5, 0.0, 0.0]).is_effect()
    with pytest.raises(DimensionMismatchException):
        matrix_to_bloch(identity(3))


def test_spin_projectors() -> None:
    direction: np.ndarray = np.array([1.0, 2.0, 2.0]) / 3.0
    plus: HermitianMatrix = spin_projector(direction)
    minus: HermitianMatrix = spin_projector(direction, -1)
    np.testing.assert_allclose(plus.array @ plus.array, plus.array, atol=1e-15)
    assert frobenius_distance(plus + minus, identity(2)) < 1e-15
    assert commutator_norm(plus, minus) < 1e-15


def test_commutator_and_norms() -> None:
    assert commutator_norm(pauli(1), pauli(3)) == pytest.approx(2.0 * np.sqrt(2.0))
    assert operator_norm(HermitianMatrix(np.diag([-3.0, 2.0]))) == pytest.approx(3.0)
