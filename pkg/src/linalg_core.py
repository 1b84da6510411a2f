import logging
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from constants import (
    EFFECT_TOL,
    HERMITIAN_TOL,
    JACOBI_MAX_SWEEPS,
    JACOBI_OFF_TOL,
    PSD_TOL,
    SQRT_CLAMP_TOL,
    STATE_TRACE_TOL,
)
from exceptions import (
    DimensionMismatchException,
    NotDensityStateException,
    NotEffectException,
    NotHermitianException,
    NotPsdException,
)

logger: logging.Logger = logging.getLogger(__name__)

PAULI: tuple[np.ndarray, np.ndarray, np.ndarray] = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


class HermitianMatrix:
    """
    Dense complex Hermitian matrix. The stored array is read-only, so values can be shared freely.
    """

    def __init__(self, entries: ArrayLike, tol: float = HERMITIAN_TOL) -> None:
        """
        Validate and store the matrix.

        Args:
            entries (ArrayLike): Square complex matrix, row-major.
            tol (float): Allowed elementwise deviation from Hermitian symmetry.
        """
        array: np.ndarray = np.array(entries, dtype=np.complex128)
        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] < 1:
            raise NotHermitianException(f"Expected a non-empty square matrix, got shape {array.shape}.")
        asymmetry: float = float(np.max(np.abs(array - array.conj().T)))
        if asymmetry > tol:
            raise NotHermitianException(f"Symmetry violation {asymmetry:.3e} exceeds {tol:.1e}.")
        # Remove the residue so that diagonal entries are exactly real
        array = 0.5 * (array + array.conj().T)
        array.setflags(write=False)
        self._array: np.ndarray = array

    @classmethod
    def hermitized(cls, entries: ArrayLike) -> "HermitianMatrix":
        """
        Build from an array that is Hermitian up to round-off (sums and products of Hermitian matrices).
        """
        array: np.ndarray = np.array(entries, dtype=np.complex128)
        return cls(0.5 * (array + array.conj().T))

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def dim(self) -> int:
        return int(self._array.shape[0])

    def trace(self) -> float:
        return float(np.trace(self._array).real)

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        _check_same_dim(self, other)
        return HermitianMatrix.hermitized(self._array + other.array)

    def __sub__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        _check_same_dim(self, other)
        return HermitianMatrix.hermitized(self._array - other.array)

    def __mul__(self, factor: float) -> "HermitianMatrix":
        return HermitianMatrix(self._array * float(factor))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim})"


class Effect(HermitianMatrix):
    """
    Hermitian matrix with spectrum inside [0, 1] (up to tolerance).
    """

    def __init__(self, entries: ArrayLike, tol: float = EFFECT_TOL) -> None:
        super().__init__(entries)
        spectrum: np.ndarray = eigenvalues(self)
        if spectrum[0] < -tol or spectrum[-1] > 1.0 + tol:
            raise NotEffectException(f"Spectrum [{spectrum[0]:.3e}, {spectrum[-1]:.3e}] leaves [0, 1].")

    @classmethod
    def of(cls, matrix: HermitianMatrix, tol: float = EFFECT_TOL) -> "Effect":
        if isinstance(matrix, Effect):
            return matrix
        return cls(matrix.array, tol)


class DensityState(HermitianMatrix):
    """
    Positive semidefinite matrix of unit trace.
    """

    def __init__(self, entries: ArrayLike, tol: float = PSD_TOL) -> None:
        super().__init__(entries)
        trace: float = self.trace()
        if abs(trace - 1.0) > STATE_TRACE_TOL:
            raise NotDensityStateException(f"Trace {trace!r} differs from 1.")
        smallest: float = float(eigenvalues(self)[0])
        if smallest < -tol:
            raise NotDensityStateException(f"Smallest eigenvalue {smallest:.3e} is negative.")

    @classmethod
    def pure(cls, vector: ArrayLike) -> "DensityState":
        """
        Build |psi><psi| from a (not necessarily normalized) state vector.
        """
        psi: np.ndarray = np.asarray(vector, dtype=np.complex128)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))


class QubitBloch:
    """
    Qubit operator a0 I + a . sigma.
    """

    def __init__(self, a0: float, a: ArrayLike) -> None:
        vector: np.ndarray = np.array(a, dtype=np.float64).reshape(3)
        vector.setflags(write=False)
        self.a0: float = float(a0)
        self.a: np.ndarray = vector

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.a))

    def is_effect(self, tol: float = EFFECT_TOL) -> bool:
        """
        |a| <= min(a0, 1 - a0), which is O <= A <= I for the corresponding matrix.
        """
        return self.norm <= min(self.a0, 1.0 - self.a0) + tol

    def complement(self) -> "QubitBloch":
        return QubitBloch(1.0 - self.a0, -self.a)

    def __repr__(self) -> str:
        return f"QubitBloch(a0={self.a0!r}, a={self.a.tolist()!r})"


def _check_same_dim(first: HermitianMatrix, second: HermitianMatrix) -> None:
    if first.dim != second.dim:
        raise DimensionMismatchException(f"{first.dim} != {second.dim}.")


def _jacobi(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Cyclic complex Jacobi diagonalization.

    Each rotation first removes the phase of the pivot a[p, q] and then applies the real symmetric rotation that
    annihilates it.

    Args:
        matrix (np.ndarray): Hermitian matrix.

    Returns:
        Ascending eigenvalues and the unitary whose columns are the matching eigenvectors.
    """
    a: np.ndarray = np.array(matrix, dtype=np.complex128)
    size: int = a.shape[0]
    vectors: np.ndarray = np.eye(size, dtype=np.complex128)
    threshold: float = JACOBI_OFF_TOL * max(1.0, float(np.linalg.norm(a)))

    converged: bool = False
    sweeps: int = 0
    for sweeps in range(JACOBI_MAX_SWEEPS):
        off_diagonal: float = float(np.sqrt(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2)))
        if off_diagonal < threshold:
            converged = True
            break

        for p in range(size - 1):
            for q in range(p + 1, size):
                pivot: complex = complex(a[p, q])
                radius: float = abs(pivot)
                if radius == 0.0:
                    continue
                phase: complex = pivot / radius
                tau: float = (a[q, q].real - a[p, p].real) / (2.0 * radius)
                t: float = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c: float = 1.0 / np.sqrt(1.0 + t * t)
                s: float = t * c
                rotation: np.ndarray = np.array(
                    [[c, s], [-s * phase.conjugate(), c * phase.conjugate()]], dtype=np.complex128
                )
                pair: list[int] = [p, q]
                a[:, pair] = a[:, pair] @ rotation
                a[pair, :] = rotation.conj().T @ a[pair, :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                vectors[:, pair] = vectors[:, pair] @ rotation

    if not converged:
        logger.warning(f"Jacobi diagonalization stopped after {JACOBI_MAX_SWEEPS} sweeps without converging.")
    else:
        logger.debug(f"Jacobi diagonalization of size {size} converged after {sweeps} sweeps.")

    values: np.ndarray = np.real(np.diag(a))
    order: np.ndarray = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]


def _qubit_spectrum(matrix: np.ndarray) -> np.ndarray:
    center: float = 0.5 * float((matrix[0, 0] + matrix[1, 1]).real)
    half_gap: float = float(np.hypot(abs(matrix[0, 1]), 0.5 * (matrix[0, 0] - matrix[1, 1]).real))
    return np.array([center - half_gap, center + half_gap])


def eigenvalues(matrix: HermitianMatrix) -> np.ndarray:
    """
    Full real spectrum in ascending order. Closed form a0 -+ |a| for d = 2, cyclic Jacobi otherwise.

    Args:
        matrix (HermitianMatrix): Validated Hermitian matrix.

    Returns:
        Ascending eigenvalues.
    """
    if not isinstance(matrix, HermitianMatrix):
        matrix = HermitianMatrix(matrix)
    return spectrum_of(matrix.array)


def spectrum_of(array: np.ndarray) -> np.ndarray:
    """
    Same as eigenvalues() on a raw array that is already known to be Hermitian (hot loops skip validation).
    """
    size: int = array.shape[0]
    if size == 1:
        return np.array([float(array[0, 0].real)])
    if size == 2:
        return _qubit_spectrum(array)
    return _jacobi(array)[0]


def eigh(matrix: HermitianMatrix) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigenvalues (ascending) and eigenvectors (columns) by Jacobi rotations.
    """
    if matrix.dim == 1:
        return np.array([float(matrix.array[0, 0].real)]), np.eye(1, dtype=np.complex128)
    return _jacobi(matrix.array)


def is_psd(matrix: HermitianMatrix, tol: float = PSD_TOL) -> bool:
    return bool(eigenvalues(matrix)[0] >= -tol)


def sqrt_psd(matrix: HermitianMatrix) -> HermitianMatrix:
    """
    Positive square root through the eigendecomposition.

    Negative eigenvalues down to -1e-8 are round-off and are clamped to zero, anything below is an error.

    Args:
        matrix (HermitianMatrix): Positive semidefinite matrix.

    Returns:
        S with S @ S = matrix.
    """
    values, vectors = eigh(matrix)
    if values[0] < -SQRT_CLAMP_TOL:
        raise NotPsdException(f"Smallest eigenvalue {values[0]:.3e}.")
    if values[0] < 0.0:
        logger.debug(f"Clamping eigenvalue {values[0]:.3e} to zero.")
    roots: np.ndarray = np.sqrt(np.clip(values, 0.0, None))
    return HermitianMatrix.hermitized((vectors * roots) @ vectors.conj().T)


def bloch_to_matrix(bloch: QubitBloch) -> HermitianMatrix:
    array: np.ndarray = bloch.a0 * np.eye(2, dtype=np.complex128)
    for component, sigma in zip(bloch.a, PAULI):
        array = array + component * sigma
    return HermitianMatrix(array)


def matrix_to_bloch(matrix: HermitianMatrix) -> QubitBloch:
    """
    a0 = tr(H) / 2, a_k = tr(H sigma_k) / 2.
    """
    if matrix.dim != 2:
        raise DimensionMismatchException(f"Bloch form needs dimension 2, got {matrix.dim}.")
    a0: float = 0.5 * float(np.trace(matrix.array).real)
    a: list[float] = [0.5 * float(np.trace(matrix.array @ sigma).real) for sigma in PAULI]
    return QubitBloch(a0, a)


def identity(dim: int) -> HermitianMatrix:
    return HermitianMatrix(np.eye(dim, dtype=np.complex128))


def zero(dim: int) -> HermitianMatrix:
    return HermitianMatrix(np.zeros((dim, dim), dtype=np.complex128))


def pauli(index: int) -> HermitianMatrix:
    """
    sigma_1, sigma_2, sigma_3 for index 1, 2, 3.
    """
    return HermitianMatrix(PAULI[index - 1])


def spin_projector(direction: ArrayLike, sign: int = 1) -> HermitianMatrix:
    """
    Spectral projection 1/2 (I +- n . sigma) for a unit vector n.
    """
    unit: np.ndarray = np.asarray(direction, dtype=np.float64)
    return bloch_to_matrix(QubitBloch(0.5, 0.5 * sign * unit))


def frobenius_distance(first: HermitianMatrix, second: HermitianMatrix) -> float:
    _check_same_dim(first, second)
    return float(np.linalg.norm(first.array - second.array))


def commutator_norm(first: HermitianMatrix, second: HermitianMatrix) -> float:
    _check_same_dim(first, second)
    return float(np.linalg.norm(first.array @ second.array - second.array @ first.array))


def operator_norm(matrix: HermitianMatrix) -> float:
    spectrum: np.ndarray = eigenvalues(matrix)
    return float(max(abs(spectrum[0]), abs(spectrum[-1])))


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    gaussian: np.ndarray = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(gaussian)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> HermitianMatrix:
    gaussian: np.ndarray = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianMatrix.hermitized(scale * (gaussian + gaussian.conj().T) / 2.0)


def random_psd(rng: np.random.Generator, dim: int, rank: Optional[int] = None) -> HermitianMatrix:
    columns: int = dim if rank is None else rank
    factor: np.ndarray = rng.normal(size=(dim, columns)) + 1j * rng.normal(size=(dim, columns))
    return HermitianMatrix.hermitized(factor @ factor.conj().T / columns)


def random_density_state(rng: np.random.Generator, dim: int) -> DensityState:
    positive: HermitianMatrix = random_psd(rng, dim)
    return DensityState(positive.array / positive.trace())


def random_qubit_state(rng: np.random.Generator) -> DensityState:
    """
    1/2 (I + r . sigma) with r uniform in the unit ball.
    """
    direction: np.ndarray = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    radius: float = float(rng.uniform()) ** (1.0 / 3.0)
    return DensityState(bloch_to_matrix(QubitBloch(0.5, 0.5 * radius * direction)).array)
