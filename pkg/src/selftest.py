import logging
import math
from typing import Any, Callable

import numpy as np
from tqdm import tqdm

from coexistence import (
    CoexistenceReport,
    binary_povm,
    coexist_qubit,
    coexist_unbiased,
    random_binary_qubit_povm,
)
from constants import STATUS_INFEASIBLE
from feasibility import FeasibilityResult, joint_feasibility
from linalg_core import (
    QubitBloch,
    frobenius_distance,
    identity,
    random_qubit_state,
    random_unitary,
)
from moments import (
    GridDistribution,
    MomentSequence,
    convolve,
    gaussian_distribution,
    growth_check,
    hermite_state,
    max_relative_error,
    moment_sequence,
    position_distribution,
    reconstruct_moments,
)
from phasespace import gaussian_generator, marginal_densities, random_gaussian_mixture, uncertainty_check
from povm import (
    DiscretePOVM,
    JointPOVM,
    OutcomeMap,
    born,
    image,
    marginals,
    max_commutator_norm,
    povm_distance,
    product_joint,
    validate,
)
from qubit_models import (
    Direction,
    build_spin_joint,
    hemisphere_marginal,
    reconstruct_sharp,
    sharp_spin,
    sphere_effect,
    spin_marginals,
)
from run_config import RunConfig

logger: logging.Logger = logging.getLogger(__name__)

AGREEMENT_MARGIN = 1e-3
RIGIDITY_COMMUTING = 1e-6
RIGIDITY_NONCOMMUTING = 0.05


def check_coexistence_boundary(config: RunConfig, pairs: int) -> dict[str, Any]:
    length: float = math.sqrt(2.0) / 4.0
    boundary: CoexistenceReport = coexist_unbiased([length, 0, 0], [0, length, 0])
    outside: CoexistenceReport = coexist_unbiased([length + 0.01, 0, 0], [0, length + 0.01, 0])
    return {
        "passed": abs(boundary.margin) < 1e-12 and boundary.coexistent and not outside.coexistent,
        "boundary_margin": boundary.margin,
        "outside_margin": outside.margin,
    }


def check_oracle_agreement(config: RunConfig, pairs: int) -> dict[str, Any]:
    rng: np.random.Generator = np.random.default_rng(config.seed)
    compared: int = 0
    mismatches: int = 0
    for _ in tqdm(range(pairs), desc="Oracle agreement", disable=not logger.isEnabledFor(logging.INFO)):
        first, first_povm = random_binary_qubit_povm(rng)
        second, second_povm = random_binary_qubit_povm(rng)
        report: CoexistenceReport = coexist_qubit(first, second)
        if abs(report.margin) <= AGREEMENT_MARGIN:
            continue
        result: FeasibilityResult = joint_feasibility(first_povm, second_povm, config.feasibility())
        compared += 1
        if result.feasible != report.coexistent:
            mismatches += 1
            logger.warning(f"Oracle disagrees: margin {report.margin!r}, residual {result.residual!r}.")
    return {"passed": mismatches == 0, "compared": compared, "mismatches": mismatches}


def check_spin_reconstruction(config: RunConfig, pairs: int) -> dict[str, Any]:
    rng: np.random.Generator = np.random.default_rng(config.seed)
    worst_projection: float = 0.0
    worst_statistics: float = 0.0
    for smeared, axis in zip(spin_marginals(build_spin_joint()), ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0])):
        recovered = reconstruct_sharp(smeared)
        sharp: DiscretePOVM = sharp_spin(axis)
        for got, want in zip(recovered.operators, sharp.operators):
            worst_projection = max(worst_projection, frobenius_distance(got, want))
        for _ in range(50):
            state = random_qubit_state(rng)
            combined: np.ndarray = recovered.coefficients @ born(state, smeared)
            worst_statistics = max(worst_statistics, float(np.max(np.abs(combined - born(state, sharp)))))
    return {
        "passed": worst_projection < 1e-12 and worst_statistics < 1e-12,
        "projection_error": worst_projection,
        "statistics_error": worst_statistics,
    }


def check_moment_recursion(config: RunConfig, pairs: int) -> dict[str, Any]:
    grid = config.grid()
    worst: float = 0.0
    for n in range(7):
        sharp: GridDistribution = position_distribution(hermite_state(n, grid))
        sharp_moments: MomentSequence = moment_sequence(sharp, 8)
        for sigma in (0.25, 0.5, 1.0):
            mu: GridDistribution = gaussian_distribution(sigma, grid.dx)
            recovered: MomentSequence = reconstruct_moments(
                moment_sequence(convolve(mu, sharp), 8), moment_sequence(mu, 8), 8
            )
            worst = max(worst, max_relative_error(recovered, sharp_moments, 8))
    return {"passed": worst <= 1e-4, "max_relative_error": worst}


def check_growth(config: RunConfig, pairs: int) -> dict[str, Any]:
    grid = config.grid()
    failures: list[int] = []
    for n in range(7):
        if not growth_check(moment_sequence(position_distribution(hermite_state(n, grid)), 12), 2.0, 2.0):
            failures.append(n)
    return {"passed": len(failures) == 0, "failing_orders": failures}


def check_sphere(config: RunConfig, pairs: int) -> dict[str, Any]:
    quadrature = config.quadrature()
    marginal: DiscretePOVM = hemisphere_marginal(Direction([0.0, 0.0, 1.0]), quadrature)
    expected: DiscretePOVM = binary_povm(QubitBloch(0.5, [0.0, 0.0, 0.25]))
    hemisphere_error: float = povm_distance(marginal, expected)
    full_error: float = frobenius_distance(sphere_effect(lambda node: True, quadrature), identity(2))
    return {
        "passed": hemisphere_error < 1e-8 and full_error < 1e-8,
        "hemisphere_error": hemisphere_error,
        "full_sphere_error": full_error,
    }


def check_uncertainty(config: RunConfig, pairs: int) -> dict[str, Any]:
    rng: np.random.Generator = np.random.default_rng(config.seed)
    grid = config.grid()
    smallest: float = math.inf
    for _ in range(pairs):
        smallest = min(smallest, uncertainty_check(marginal_densities(random_gaussian_mixture(rng, grid))).product)
    gaussian: float = uncertainty_check(marginal_densities(gaussian_generator(1.0, grid))).product
    return {
        "passed": smallest >= 0.25 - 1e-9 and abs(gaussian - 0.25) < 1e-6,
        "smallest_product": smallest,
        "gaussian_product": gaussian,
    }


def check_rigidity(config: RunConfig, pairs: int) -> dict[str, Any]:
    rng: np.random.Generator = np.random.default_rng(config.seed)
    violations: int = 0
    feasible_count: int = 0
    uncertain_noncommuting: int = 0
    for index in tqdm(range(pairs), desc="Sharp rigidity", disable=not logger.isEnabledFor(logging.INFO)):
        direction: np.ndarray = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        sharp: DiscretePOVM = sharp_spin(direction)
        if index % 2 == 0:
            # Effects diagonal in the eigenbasis of the sharp observable
            weights: np.ndarray = rng.uniform(size=2)
            bloch: QubitBloch = QubitBloch(0.5 * (weights[0] + weights[1]), 0.5 * (weights[0] - weights[1]) * direction)
            second: DiscretePOVM = binary_povm(bloch)
        else:
            _, second = random_binary_qubit_povm(rng)
        result: FeasibilityResult = joint_feasibility(sharp, second, config.feasibility())
        commutator: float = max_commutator_norm(sharp, second)
        feasible_count += int(result.feasible)
        if result.feasible and commutator >= RIGIDITY_COMMUTING:
            violations += 1
        elif commutator > RIGIDITY_NONCOMMUTING and result.status != STATUS_INFEASIBLE:
            uncertain_noncommuting += 1
            logger.info(f"Noncommuting pair ({commutator:.3e}) left {result.status}.")
    return {
        "passed": violations == 0,
        "feasible": feasible_count,
        "violations": violations,
        "uncertain_noncommuting": uncertain_noncommuting,
    }


def check_product_joint(config: RunConfig, pairs: int) -> dict[str, Any]:
    rng: np.random.Generator = np.random.default_rng(config.seed)
    worst: float = 0.0
    valid: bool = True
    for _ in range(pairs):
        dim: int = int(rng.integers(2, 5))
        sharp: DiscretePOVM = DiscretePOVM.from_orthonormal_basis(random_unitary(rng, dim))
        first: DiscretePOVM = image(sharp, OutcomeMap({k: int(rng.integers(0, 2)) for k in range(dim)}, [0, 1]))
        second: DiscretePOVM = image(sharp, OutcomeMap({k: int(rng.integers(0, 3)) for k in range(dim)}, [0, 1, 2]))
        joint: JointPOVM = product_joint(first, second)
        valid = valid and bool(validate(joint.flatten()))
        rows, cols = marginals(joint)
        worst = max(worst, povm_distance(rows, first), povm_distance(cols, second))
    return {"passed": valid and worst < 1e-10, "marginal_error": worst}


CHECKS: dict[str, Callable[[RunConfig, int], dict[str, Any]]] = {
    "coexistence_boundary": check_coexistence_boundary,
    "oracle_agreement": check_oracle_agreement,
    "spin_reconstruction": check_spin_reconstruction,
    "moment_recursion": check_moment_recursion,
    "growth_condition": check_growth,
    "sphere_observable": check_sphere,
    "uncertainty_product": check_uncertainty,
    "projection_rigidity": check_rigidity,
    "product_joint": check_product_joint,
}


def run_selftest(config: RunConfig, pairs: int) -> dict[str, dict[str, Any]]:
    """
    Run every acceptance check at the given sample size.

    Args:
        config (RunConfig): Seed, grid and quadrature.
        pairs (int): Random samples per sampled check.

    Returns:
        Check name mapped to its result, each with a "passed" flag.
    """
    results: dict[str, dict[str, Any]] = {}
    for name, check in CHECKS.items():
        results[name] = check(config, pairs)
        logger.info(f"{name}: {'passed' if results[name]['passed'] else 'FAILED'}")
    return results
