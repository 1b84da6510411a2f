import logging
from typing import Any, Optional

import numpy as np
from scipy.optimize import OptimizeResult, minimize
from tqdm import tqdm

from constants import (
    DEFAULT_MAX_ITER,
    DEFAULT_SEED,
    DEFAULT_STARTS,
    EFFECT_TOL,
    FEASIBILITY_TOL,
    MAX_ORACLE_DIM,
    STATUS_FEASIBLE,
    STATUS_INFEASIBLE,
    STATUS_UNCERTAIN,
    UNCERTAIN_TOL,
)
from exceptions import DimensionMismatchException, NonBinaryPovmException
from linalg_core import HermitianMatrix
from povm import DiscretePOVM, JointPOVM, require_valid

logger: logging.Logger = logging.getLogger(__name__)


class FeasibilityConfig:
    """
    Settings of the multi-start simplex search.
    """

    def __init__(
        self,
        starts: int = DEFAULT_STARTS,
        max_iter: int = DEFAULT_MAX_ITER,
        seed: int = DEFAULT_SEED,
        feas_tol: float = FEASIBILITY_TOL,
        uncertain_tol: float = UNCERTAIN_TOL,
        effect_tol: float = EFFECT_TOL,
        step: float = 0.05,
        perturbation: float = 0.1,
        consensus: int = 3,
        consensus_tol: float = 1e-6,
        progress: bool = False,
    ) -> None:
        """
        Args:
            starts (int): Number of simplex runs, the first three are the deterministic starts.
            max_iter (int): Simplex iterations per start.
            seed (int): Seed of the random perturbations.
            feas_tol (float): Objective value accepted as feasible.
            uncertain_tol (float): Below this (and above feas_tol) the verdict is boundary-uncertain.
            effect_tol (float): Eigenvalue slack when validating the two inputs.
            step (float): Edge length of the initial simplex.
            perturbation (float): Scale of the random Hermitian perturbations of the deterministic starts.
            consensus (int): Stop once this many starts agree on a positive optimum (the objective is convex).
            consensus_tol (float): Agreement tolerance of the consensus stop.
            progress (bool): Show a progress bar on stderr.
        """
        self.starts: int = starts
        self.max_iter: int = max_iter
        self.seed: int = seed
        self.feas_tol: float = feas_tol
        self.uncertain_tol: float = uncertain_tol
        self.effect_tol: float = effect_tol
        self.step: float = step
        self.perturbation: float = perturbation
        self.consensus: int = consensus
        self.consensus_tol: float = consensus_tol
        self.progress: bool = progress


class FeasibilityResult:
    """
    Outcome of the joint observable search. When feasible, the witness blocks satisfy the positivity constraints
    within feas_tol and its marginals reproduce the inputs.
    """

    def __init__(
        self,
        status: str,
        objective: float,
        witness: Optional[JointPOVM],
        evaluations: int,
        best_start: int,
    ) -> None:
        self.status: str = status
        self.feasible: bool = status == STATUS_FEASIBLE
        self.objective: float = objective
        self.residual: float = max(objective, 0.0)
        self.witness: Optional[JointPOVM] = witness
        self.evaluations: int = evaluations
        self.best_start: int = best_start

    def __repr__(self) -> str:
        return f"FeasibilityResult(status={self.status!r}, residual={self.residual!r})"


class _HermitianParameters:
    """
    Real coordinates of a d x d Hermitian matrix: diagonal, then real and imaginary parts of the upper triangle.
    """

    def __init__(self, dim: int) -> None:
        self.dim: int = dim
        self.upper: tuple[np.ndarray, np.ndarray] = np.triu_indices(dim, 1)
        self.offdiagonal: int = len(self.upper[0])

    def to_matrix(self, vector: np.ndarray) -> np.ndarray:
        matrix: np.ndarray = np.diag(vector[: self.dim]).astype(np.complex128)
        values: np.ndarray = vector[self.dim : self.dim + self.offdiagonal] + 1j * vector[self.dim + self.offdiagonal :]
        matrix[self.upper] = values
        matrix[self.upper[1], self.upper[0]] = values.conj()
        return matrix

    def to_vector(self, matrix: np.ndarray) -> np.ndarray:
        values: np.ndarray = matrix[self.upper]
        return np.concatenate([np.diag(matrix).real, values.real, values.imag])


def _blocks(candidate: np.ndarray, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """
    G, A - G, B - G and I - A - B + G stacked in this order.
    """
    identity: np.ndarray = np.eye(candidate.shape[0])
    return np.stack([candidate, first - candidate, second - candidate, identity - first - second + candidate])


def joint_feasibility(
    first: DiscretePOVM, second: DiscretePOVM, config: Optional[FeasibilityConfig] = None
) -> FeasibilityResult:
    """
    Search for a joint observable of two binary observables by minimizing the largest negative eigenvalue of the
    four blocks built from G = G_{++}. Derivative-free multi-start Nelder-Mead; cannot certify infeasibility, hence
    the boundary-uncertain band.

    Args:
        first (DiscretePOVM): Binary observable {A, I - A}.
        second (DiscretePOVM): Binary observable {B, I - B}.
        config (Optional[FeasibilityConfig]): Search settings.

    Returns:
        Verdict, best objective, witness joint observable when feasible and the evaluation count.
    """
    settings: FeasibilityConfig = config if config is not None else FeasibilityConfig()
    if not (first.is_binary and second.is_binary):
        raise NonBinaryPovmException(f"Got {len(first)} and {len(second)} outcomes.")
    if first.dim != second.dim:
        raise DimensionMismatchException(f"{first.dim} != {second.dim}.")
    if first.dim > MAX_ORACLE_DIM:
        raise DimensionMismatchException(f"Dimension {first.dim} exceeds {MAX_ORACLE_DIM}.")
    require_valid(first, settings.effect_tol)
    require_valid(second, settings.effect_tol)

    a: np.ndarray = first.operators[0].array
    b: np.ndarray = second.operators[0].array
    parameters: _HermitianParameters = _HermitianParameters(first.dim)

    def objective(vector: np.ndarray) -> float:
        smallest: np.ndarray = np.linalg.eigvalsh(_blocks(parameters.to_matrix(vector), a, b))[:, 0]
        return float(np.max(-smallest))

    anchors: list[np.ndarray] = [0.5 * (a @ b + b @ a), 0.5 * a, 0.5 * b]
    rng: np.random.Generator = np.random.default_rng(settings.seed)
    starts: list[np.ndarray] = []
    for index in range(settings.starts):
        anchor: np.ndarray = anchors[index % len(anchors)]
        if index < len(anchors):
            starts.append(parameters.to_vector(anchor))
        else:
            noise: np.ndarray = rng.normal(size=(first.dim, first.dim)) + 1j * rng.normal(size=(first.dim, first.dim))
            noise = settings.perturbation * 0.5 * (noise + noise.conj().T) / np.sqrt(2.0 * first.dim)
            starts.append(parameters.to_vector(anchor + noise))

    best_value: float = np.inf
    best_vector: Optional[np.ndarray] = None
    best_start: int = -1
    evaluations: int = 0
    optima: list[float] = []

    for index, start in enumerate(tqdm(starts, desc="Feasibility search", disable=not settings.progress)):
        value: float = objective(start)
        evaluations += 1
        vector: np.ndarray = start
        if value > settings.feas_tol:
            simplex: np.ndarray = np.vstack([start, start + settings.step * np.eye(len(start))])
            result: OptimizeResult = minimize(
                objective,
                start,
                method="Nelder-Mead",
                options={
                    "maxiter": settings.max_iter,
                    "initial_simplex": simplex,
                    "xatol": 1e-9,
                    "fatol": 1e-11,
                },
            )
            evaluations += int(result.nfev)
            if float(result.fun) < value:
                value = float(result.fun)
                vector = np.asarray(result.x)
        logger.debug(f"Start {index}: objective {value:.3e}.")

        optima.append(value)
        if value < best_value:
            best_value, best_vector, best_start = value, vector, index
        if best_value <= settings.feas_tol:
            break
        if sum(1 for optimum in optima if optimum - best_value <= settings.consensus_tol) >= settings.consensus:
            logger.debug(f"{settings.consensus} starts agree on objective {best_value:.3e}.")
            break

    status: str = STATUS_INFEASIBLE
    if best_value <= settings.feas_tol:
        status = STATUS_FEASIBLE
    elif best_value < settings.uncertain_tol:
        status = STATUS_UNCERTAIN

    witness: Optional[JointPOVM] = None
    if status == STATUS_FEASIBLE and best_vector is not None:
        blocks: np.ndarray = _blocks(parameters.to_matrix(best_vector), a, b)
        witness = JointPOVM(
            first.labels,
            second.labels,
            [
                [HermitianMatrix.hermitized(blocks[0]), HermitianMatrix.hermitized(blocks[1])],
                [HermitianMatrix.hermitized(blocks[2]), HermitianMatrix.hermitized(blocks[3])],
            ],
        )

    logger.info(f"Joint feasibility: {status} (objective {best_value:.3e}, {evaluations} evaluations).")
    return FeasibilityResult(status, best_value, witness, evaluations, best_start)


def feasibility_to_dict(result: FeasibilityResult) -> dict[str, Any]:
    return {
        "feasible": result.feasible,
        "status": result.status,
        "residual": result.residual,
        "objective": result.objective,
        "evaluations": result.evaluations,
        "best_start": result.best_start,
    }
