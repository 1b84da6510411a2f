import logging
from typing import Hashable, Iterator, Mapping, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from constants import (
    COMMUTE_TOL,
    COMPLETENESS_TOL,
    EFFECT_TOL,
    EQUALITY_TOL,
    LUDERS_MIN_PROBABILITY,
    MAX_RANGE_OUTCOMES,
    SINGULAR_DET_TOL,
    STOCHASTIC_TOL,
)
from exceptions import (
    DimensionMismatchException,
    InvalidPovmException,
    InvalidStochasticMatrixException,
    NonCommutingException,
    PartialOutcomeMapException,
    ShapeMismatchException,
    SingularSmearingException,
    TooManyOutcomesException,
)
from linalg_core import (
    DensityState,
    Effect,
    HermitianMatrix,
    commutator_norm,
    operator_norm,
    spectrum_of,
    sqrt_psd,
)

logger: logging.Logger = logging.getLogger(__name__)

Label = Hashable


class DiscretePOVM:
    """
    Finite family of labelled operators. Construction only checks shapes, validate() checks the observable axioms,
    so that invalid families (unsmearing output, user input) can still be represented and reported on.
    """

    def __init__(self, labels: Sequence[Label], operators: Sequence[HermitianMatrix]) -> None:
        """
        Args:
            labels (Sequence[Label]): Outcome identifiers, unique.
            operators (Sequence[HermitianMatrix]): One operator per label.
        """
        if len(labels) != len(operators) or len(operators) == 0:
            raise InvalidPovmException(f"Got {len(labels)} labels for {len(operators)} effects.")
        if len(set(labels)) != len(labels):
            raise InvalidPovmException("Outcome labels must be unique.")
        dims: set[int] = {operator.dim for operator in operators}
        if len(dims) != 1:
            raise DimensionMismatchException(f"Effects have dimensions {sorted(dims)}.")
        self.labels: tuple[Label, ...] = tuple(labels)
        self.operators: tuple[HermitianMatrix, ...] = tuple(operators)
        self._index: dict[Label, int] = {label: index for index, label in enumerate(self.labels)}

    @classmethod
    def from_arrays(cls, labels: Sequence[Label], arrays: Sequence[ArrayLike]) -> "DiscretePOVM":
        return cls(labels, [HermitianMatrix(array) for array in arrays])

    @classmethod
    def from_orthonormal_basis(cls, unitary: ArrayLike, labels: Optional[Sequence[Label]] = None) -> "DiscretePOVM":
        """
        Sharp observable of rank one projections onto the columns of a unitary.
        """
        columns: np.ndarray = np.asarray(unitary, dtype=np.complex128)
        size: int = columns.shape[1]
        projections: list[HermitianMatrix] = [
            HermitianMatrix.hermitized(np.outer(columns[:, k], columns[:, k].conj())) for k in range(size)
        ]
        return cls(list(range(size)) if labels is None else labels, projections)

    @property
    def dim(self) -> int:
        return self.operators[0].dim

    @property
    def effects(self) -> list[Effect]:
        return [Effect.of(operator) for operator in self.operators]

    @property
    def is_binary(self) -> bool:
        return len(self.operators) == 2

    def index(self, label: Label) -> int:
        return self._index[label]

    def effect(self, label: Label) -> HermitianMatrix:
        return self.operators[self._index[label]]

    def total(self) -> HermitianMatrix:
        return HermitianMatrix.hermitized(sum(operator.array for operator in self.operators))

    def __len__(self) -> int:
        return len(self.operators)

    def __iter__(self) -> Iterator[tuple[Label, HermitianMatrix]]:
        return iter(zip(self.labels, self.operators))

    def __repr__(self) -> str:
        return f"DiscretePOVM(labels={list(self.labels)!r}, dim={self.dim})"


class JointPOVM:
    """
    Observable on a product outcome set, effects indexed by (row, column).
    """

    def __init__(
        self,
        row_labels: Sequence[Label],
        col_labels: Sequence[Label],
        operators: Sequence[Sequence[HermitianMatrix]],
    ) -> None:
        if len(operators) != len(row_labels) or any(len(row) != len(col_labels) for row in operators):
            raise InvalidPovmException("Joint effect table does not match its labels.")
        self.row_labels: tuple[Label, ...] = tuple(row_labels)
        self.col_labels: tuple[Label, ...] = tuple(col_labels)
        self.operators: tuple[tuple[HermitianMatrix, ...], ...] = tuple(tuple(row) for row in operators)
        # Shape checks of the flattened family
        self._flat: DiscretePOVM = DiscretePOVM(
            [(row, col) for row in self.row_labels for col in self.col_labels],
            [operator for row in self.operators for operator in row],
        )

    @property
    def dim(self) -> int:
        return self._flat.dim

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def effect(self, row: Label, col: Label) -> HermitianMatrix:
        return self.operators[self.row_labels.index(row)][self.col_labels.index(col)]

    def flatten(self) -> DiscretePOVM:
        return self._flat

    def __repr__(self) -> str:
        return f"JointPOVM(rows={list(self.row_labels)!r}, cols={list(self.col_labels)!r}, dim={self.dim})"


class StochasticMatrix:
    """
    Column stochastic matrix lambda[j][k]: rows are new outcomes j, columns are sharp outcomes k.
    """

    def __init__(self, entries: ArrayLike, tol: float = STOCHASTIC_TOL) -> None:
        array: np.ndarray = np.array(entries, dtype=np.float64)
        if array.ndim != 2 or array.size == 0:
            raise InvalidStochasticMatrixException(f"Expected a non-empty matrix, got shape {array.shape}.")
        if np.min(array) < 0.0:
            raise InvalidStochasticMatrixException(f"Negative entry {np.min(array)!r}.")
        column_error: float = float(np.max(np.abs(array.sum(axis=0) - 1.0)))
        if column_error > tol:
            raise InvalidStochasticMatrixException(f"Column sums deviate from 1 by {column_error:.3e}.")
        array.setflags(write=False)
        self.entries: np.ndarray = array

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    @classmethod
    def symmetric_binary(cls, contrast: float) -> "StochasticMatrix":
        """
        [[1/2 (1 + c), 1/2 (1 - c)], [1/2 (1 - c), 1/2 (1 + c)]], turning {P+, P-} into 1/2 (I +- c n . sigma).
        """
        high: float = 0.5 * (1.0 + contrast)
        low: float = 0.5 * (1.0 - contrast)
        return cls([[high, low], [low, high]])


class OutcomeMap:
    """
    Total map between outcome labels (pointer function).
    """

    def __init__(self, mapping: Mapping[Label, Label], targets: Optional[Sequence[Label]] = None) -> None:
        """
        Args:
            mapping (Mapping[Label, Label]): Image of every source label.
            targets (Optional[Sequence[Label]]): Order of target outcomes. Defaults to order of first appearance.
        """
        self.mapping: dict[Label, Label] = dict(mapping)
        if targets is None:
            targets = list(dict.fromkeys(self.mapping.values()))
        missing: set[Label] = set(self.mapping.values()) - set(targets)
        if missing:
            raise PartialOutcomeMapException(f"Targets {sorted(map(str, missing))} are not listed.")
        self.targets: tuple[Label, ...] = tuple(targets)

    @classmethod
    def identity(cls, labels: Sequence[Label]) -> "OutcomeMap":
        return cls({label: label for label in labels}, labels)

    @classmethod
    def constant(cls, labels: Sequence[Label], target: Label = "all") -> "OutcomeMap":
        return cls({label: target for label in labels}, [target])

    def __call__(self, label: Label) -> Label:
        if label not in self.mapping:
            raise PartialOutcomeMapException(f"No image for outcome {label!r}.")
        return self.mapping[label]

    def then(self, other: "OutcomeMap") -> "OutcomeMap":
        """
        Composition other o self.
        """
        return OutcomeMap({label: other(target) for label, target in self.mapping.items()}, other.targets)


class ValidationReport:
    def __init__(self, ok: bool, violation: Optional[str] = None, index: Optional[int] = None) -> None:
        self.ok: bool = ok
        self.violation: Optional[str] = violation
        self.index: Optional[int] = index

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        return "ValidationReport(ok)" if self.ok else f"ValidationReport({self.violation!r})"


class UnsmearResult:
    """
    Operators P_k = sum_j mu[k][j] E_j with mu the inverse of the smearing matrix. Not necessarily effects.
    """

    def __init__(self, povm: DiscretePOVM, coefficients: np.ndarray, condition_number: float) -> None:
        self.povm: DiscretePOVM = povm
        self.coefficients: np.ndarray = coefficients
        self.condition_number: float = condition_number

    @property
    def operators(self) -> tuple[HermitianMatrix, ...]:
        return self.povm.operators


class RangeInclusionResult:
    def __init__(
        self, included: bool, witness: dict[frozenset, frozenset], missing: Optional[frozenset] = None
    ) -> None:
        self.included: bool = included
        self.witness: dict[frozenset, frozenset] = witness
        self.missing: Optional[frozenset] = missing

    def __bool__(self) -> bool:
        return self.included


class LudersResult:
    def __init__(self, state: Optional[DensityState], probability: float) -> None:
        self.state: Optional[DensityState] = state
        self.probability: float = probability


def _require_same_dim(first: DiscretePOVM, second: DiscretePOVM) -> None:
    if first.dim != second.dim:
        raise DimensionMismatchException(f"{first.dim} != {second.dim}.")


def validate(povm: DiscretePOVM, tol: float = EFFECT_TOL) -> ValidationReport:
    """
    Check every effect lies between O and I, then the completeness sum.

    Args:
        povm (DiscretePOVM): Family to check.
        tol (float): Eigenvalue slack for the effect bounds.

    Returns:
        Report naming the first failed invariant.
    """
    for index, (label, operator) in enumerate(povm):
        spectrum: np.ndarray = spectrum_of(operator.array)
        if spectrum[0] < -tol:
            message: str = f"effect {label!r} is not positive (min eigenvalue {spectrum[0]:.3e})"
            return ValidationReport(False, message, index)
        if spectrum[-1] > 1.0 + tol:
            return ValidationReport(False, f"effect {label!r} exceeds I (max eigenvalue {spectrum[-1]:.3e})", index)
    deviation: float = float(np.max(np.abs(povm.total().array - np.eye(povm.dim))))
    if deviation > COMPLETENESS_TOL:
        return ValidationReport(False, f"sum ≠ I (max deviation {deviation:.3e})")
    return ValidationReport(True)


def require_valid(povm: DiscretePOVM, tol: float = EFFECT_TOL) -> DiscretePOVM:
    report: ValidationReport = validate(povm, tol)
    if not report:
        raise InvalidPovmException(str(report.violation))
    return povm


def born(state: DensityState, povm: DiscretePOVM) -> np.ndarray:
    """
    Outcome probabilities tr(rho E_i).
    """
    if state.dim != povm.dim:
        raise DimensionMismatchException(f"State has dimension {state.dim}, observable {povm.dim}.")
    return np.array([float(np.trace(state.array @ operator.array).real) for operator in povm.operators])


def marginals(joint: JointPOVM) -> tuple[DiscretePOVM, DiscretePOVM]:
    rows: list[HermitianMatrix] = [
        HermitianMatrix.hermitized(sum(operator.array for operator in row)) for row in joint.operators
    ]
    cols: list[HermitianMatrix] = [
        HermitianMatrix.hermitized(sum(row[k].array for row in joint.operators)) for k in range(joint.shape[1])
    ]
    return DiscretePOVM(joint.row_labels, rows), DiscretePOVM(joint.col_labels, cols)


def smear(povm: DiscretePOVM, matrix: StochasticMatrix, labels: Optional[Sequence[Label]] = None) -> DiscretePOVM:
    """
    E_j = sum_k lambda[j][k] P_k.

    Args:
        povm (DiscretePOVM): Observable being post-processed.
        matrix (StochasticMatrix): Noise, one column per outcome of povm.
        labels (Optional[Sequence[Label]]): Labels of new outcomes. Defaults to 0..m-1.

    Returns:
        Smeared observable.
    """
    if matrix.cols != len(povm):
        raise ShapeMismatchException(f"Matrix has {matrix.cols} columns, observable {len(povm)} outcomes.")
    stack: np.ndarray = np.stack([operator.array for operator in povm.operators])
    smeared: np.ndarray = np.tensordot(matrix.entries, stack, axes=(1, 0))
    new_labels: Sequence[Label] = list(range(matrix.rows)) if labels is None else labels
    return DiscretePOVM(new_labels, [HermitianMatrix.hermitized(array) for array in smeared])


def unsmear(povm: DiscretePOVM, matrix: StochasticMatrix, labels: Optional[Sequence[Label]] = None) -> UnsmearResult:
    """
    Invert smear(): P_k = sum_j mu[k][j] E_j with mu the inverse of lambda.

    Args:
        povm (DiscretePOVM): Smeared observable.
        matrix (StochasticMatrix): Square invertible smearing matrix.
        labels (Optional[Sequence[Label]]): Labels of recovered outcomes. Defaults to 0..n-1.

    Returns:
        Recovered operators with the coefficients and the condition number of lambda.
    """
    if matrix.rows != matrix.cols:
        raise ShapeMismatchException(f"Unsmearing needs a square matrix, got {matrix.rows}x{matrix.cols}.")
    if matrix.rows != len(povm):
        raise ShapeMismatchException(f"Matrix has {matrix.rows} rows, observable {len(povm)} outcomes.")
    determinant: float = float(np.linalg.det(matrix.entries))
    if abs(determinant) < SINGULAR_DET_TOL:
        raise SingularSmearingException(f"Determinant {determinant:.3e}.")

    coefficients: np.ndarray = np.linalg.inv(matrix.entries)
    condition_number: float = float(np.linalg.cond(matrix.entries))
    logger.debug(f"Unsmearing with condition number {condition_number:.3e}.")

    stack: np.ndarray = np.stack([operator.array for operator in povm.operators])
    recovered: np.ndarray = np.tensordot(coefficients, stack, axes=(1, 0))
    new_labels: Sequence[Label] = list(range(matrix.cols)) if labels is None else labels
    result: DiscretePOVM = DiscretePOVM(new_labels, [HermitianMatrix.hermitized(array) for array in recovered])
    return UnsmearResult(result, coefficients, condition_number)


def image(povm: DiscretePOVM, outcome_map: OutcomeMap) -> DiscretePOVM:
    """
    Image observable E^f(Y) = E(f^-1(Y)).
    """
    zero: np.ndarray = np.zeros((povm.dim, povm.dim), dtype=np.complex128)
    sums: dict[Label, np.ndarray] = {target: zero for target in outcome_map.targets}
    for label, operator in povm:
        sums[outcome_map(label)] = sums[outcome_map(label)] + operator.array
    return DiscretePOVM(list(sums.keys()), [HermitianMatrix.hermitized(array) for array in sums.values()])


def _subset_sums(povm: DiscretePOVM) -> np.ndarray:
    """
    E(X) for every subset X, indexed by bitmask over outcome positions.
    """
    count: int = len(povm)
    if count > MAX_RANGE_OUTCOMES:
        raise TooManyOutcomesException(f"{count} outcomes, at most {MAX_RANGE_OUTCOMES} are enumerated.")
    sums: np.ndarray = np.zeros((1 << count, povm.dim, povm.dim), dtype=np.complex128)
    for mask in range(1, 1 << count):
        lowest: int = (mask & -mask).bit_length() - 1
        sums[mask] = sums[mask & (mask - 1)] + povm.operators[lowest].array
    return sums


def _subset(povm: DiscretePOVM, mask: int) -> frozenset:
    return frozenset(label for position, label in enumerate(povm.labels) if mask >> position & 1)


def range_effects(povm: DiscretePOVM) -> list[tuple[frozenset, HermitianMatrix]]:
    """
    All subset sums E(X), including O (empty set) and I (all outcomes).
    """
    sums: np.ndarray = _subset_sums(povm)
    return [(_subset(povm, mask), HermitianMatrix.hermitized(sums[mask])) for mask in range(len(sums))]


def is_regular(povm: DiscretePOVM) -> bool:
    """
    True iff no range effect other than O and I lies below or above 1/2 I.
    """
    sums: np.ndarray = _subset_sums(povm)
    identity: np.ndarray = np.eye(povm.dim)
    for mask in range(len(sums)):
        array: np.ndarray = sums[mask]
        if np.linalg.norm(array) < EQUALITY_TOL or np.linalg.norm(array - identity) < EQUALITY_TOL:
            continue
        spectrum: np.ndarray = spectrum_of(0.5 * (array + array.conj().T))
        if not (spectrum[-1] > 0.5 + EFFECT_TOL and spectrum[0] < 0.5 - EFFECT_TOL):
            logger.debug(f"Range effect of {set(_subset(povm, mask))} is comparable with 1/2 I.")
            return False
    return True


def range_inclusion(smaller: DiscretePOVM, larger: DiscretePOVM, tol: float = EQUALITY_TOL) -> RangeInclusionResult:
    """
    Decide ran(smaller) ⊆ ran(larger) by exhaustive comparison of subset sums (Frobenius distance < tol).

    Args:
        smaller (DiscretePOVM): Observable whose range is tested.
        larger (DiscretePOVM): Candidate encompassing observable.
        tol (float): Frobenius distance counted as equality.

    Returns:
        Result with a witness assigning every subset of smaller a subset of larger with the same effect.
    """
    _require_same_dim(smaller, larger)
    candidates: np.ndarray = _subset_sums(larger)
    wanted: np.ndarray = _subset_sums(smaller)
    witness: dict[frozenset, frozenset] = {}
    for mask in range(len(wanted)):
        distances: np.ndarray = np.linalg.norm(candidates - wanted[mask], axis=(1, 2))
        best: int = int(np.argmin(distances))
        if distances[best] >= tol:
            return RangeInclusionResult(False, witness, _subset(smaller, mask))
        witness[_subset(smaller, mask)] = _subset(larger, best)
    return RangeInclusionResult(True, witness)


def max_commutator_norm(first: DiscretePOVM, second: DiscretePOVM) -> float:
    _require_same_dim(first, second)
    return max(commutator_norm(a, b) for a in first.operators for b in second.operators)


def commutes(first: DiscretePOVM, second: DiscretePOVM, tol: float = COMMUTE_TOL) -> bool:
    return max_commutator_norm(first, second) < tol


def product_joint(first: DiscretePOVM, second: DiscretePOVM) -> JointPOVM:
    """
    F_ij = E1_i E2_j for commuting observables, Hermitized to absorb round-off in the commutator.
    """
    residue: float = max_commutator_norm(first, second)
    if residue > COMMUTE_TOL:
        raise NonCommutingException(f"Commutator norm {residue:.3e}.")
    table: list[list[HermitianMatrix]] = [
        [HermitianMatrix.hermitized(a.array @ b.array) for b in second.operators] for a in first.operators
    ]
    return JointPOVM(first.labels, second.labels, table)


def luders(state: DensityState, effect: HermitianMatrix) -> LudersResult:
    """
    Generalized Lüders operation rho -> A^1/2 rho A^1/2 / tr(rho A).

    Args:
        state (DensityState): Prior state.
        effect (HermitianMatrix): Registered effect A.

    Returns:
        Posterior state (None when the probability is zero) and the probability tr(rho A).
    """
    checked: Effect = Effect.of(effect)
    if state.dim != checked.dim:
        raise DimensionMismatchException(f"State has dimension {state.dim}, effect {checked.dim}.")
    probability: float = float(np.trace(state.array @ checked.array).real)
    if probability <= LUDERS_MIN_PROBABILITY:
        logger.info(f"Effect has probability {probability:.3e}, no posterior state.")
        return LudersResult(None, probability)
    root: np.ndarray = sqrt_psd(checked).array
    updated: np.ndarray = root @ state.array @ root
    updated = 0.5 * (updated + updated.conj().T)
    return LudersResult(DensityState(updated / np.trace(updated).real), probability)


def is_projection_valued(povm: DiscretePOVM, tol: float = EQUALITY_TOL) -> bool:
    return all(np.linalg.norm(op.array @ op.array - op.array) < tol for op in povm.operators)


def joint_from_functions(povm: DiscretePOVM, first: OutcomeMap, second: OutcomeMap) -> JointPOVM:
    """
    F(x, y) = E(f1^-1(x) ∩ f2^-1(y)): two functions of one observable yield a joint observable.
    """
    zero: np.ndarray = np.zeros((povm.dim, povm.dim), dtype=np.complex128)
    table: dict[tuple[Label, Label], np.ndarray] = {
        (row, col): zero for row in first.targets for col in second.targets
    }
    for label, operator in povm:
        key: tuple[Label, Label] = (first(label), second(label))
        table[key] = table[key] + operator.array
    return JointPOVM(
        first.targets,
        second.targets,
        [[HermitianMatrix.hermitized(table[(row, col)]) for col in second.targets] for row in first.targets],
    )


def _real_span(povm: DiscretePOVM) -> np.ndarray:
    return np.stack([np.concatenate([op.array.real.ravel(), op.array.imag.ravel()]) for op in povm.operators])


def informationally_equivalent(first: DiscretePOVM, second: DiscretePOVM, tol: float = EQUALITY_TOL) -> bool:
    """
    True iff both effect families span the same real operator space, so they separate the same states.
    """
    _require_same_dim(first, second)
    a: np.ndarray = _real_span(first)
    b: np.ndarray = _real_span(second)
    rank_a: int = int(np.linalg.matrix_rank(a, tol=tol))
    rank_b: int = int(np.linalg.matrix_rank(b, tol=tol))
    rank_joint: int = int(np.linalg.matrix_rank(np.vstack([a, b]), tol=tol))
    return rank_a == rank_b == rank_joint


def povm_distance(first: DiscretePOVM, second: DiscretePOVM) -> float:
    """
    Max over outcomes (in order) of the operator norm of E1_i - E2_i.
    """
    _require_same_dim(first, second)
    if len(first) != len(second):
        raise ShapeMismatchException(f"{len(first)} != {len(second)} outcomes.")
    return max(operator_norm(a - b) for a, b in zip(first.operators, second.operators))
