import numpy as np
import pytest

from coexistence import CoexistenceReport, binary_povm, coexist_qubit, coexist_unbiased, random_binary_qubit_povm
from constants import STATUS_FEASIBLE, STATUS_INFEASIBLE
from exceptions import DimensionMismatchException, InvalidPovmException, NonBinaryPovmException
from feasibility import FeasibilityConfig, FeasibilityResult, feasibility_to_dict, joint_feasibility
from linalg_core import QubitBloch
from povm import DiscretePOVM, StochasticMatrix, marginals, povm_distance, smear, validate
from qubit_models import sharp_spin

WITNESS_TOL: float = 1e-7


def test_rejects_non_binary() -> None:
    three: DiscretePOVM = DiscretePOVM.from_orthonormal_basis(np.eye(3))
    binary: DiscretePOVM = DiscretePOVM.from_arrays(["+", "-"], [np.diag([1.0, 0.0, 0.0]), np.diag([0.0, 1.0, 1.0])])
    with pytest.raises(NonBinaryPovmException):
        joint_feasibility(three, binary)


def test_rejects_dimension_mismatch() -> None:
    binary: DiscretePOVM = DiscretePOVM.from_arrays(["+", "-"], [np.diag([1.0, 0.0, 0.0]), np.diag([0.0, 1.0, 1.0])])
    with pytest.raises(DimensionMismatchException):
        joint_feasibility(sharp_spin([0.0, 0.0, 1.0]), binary)


def test_effect_tolerance_of_inputs() -> None:
    rounded: DiscretePOVM = DiscretePOVM.from_arrays(["+", "-"], [np.diag([-1e-8, 0.5]), np.diag([1.0 + 1e-8, 0.5])])
    sharp: DiscretePOVM = sharp_spin([0.0, 0.0, 1.0])
    with pytest.raises(InvalidPovmException):
        joint_feasibility(rounded, sharp)
    result: FeasibilityResult = joint_feasibility(rounded, sharp, FeasibilityConfig(effect_tol=1e-6))
    assert result.status == STATUS_FEASIBLE


def test_commuting_pair_feasible_at_first_start() -> None:
    sharp: DiscretePOVM = sharp_spin([0.0, 0.0, 1.0])
    noisy: DiscretePOVM = smear(sharp, StochasticMatrix.symmetric_binary(0.4), sharp.labels)
    result: FeasibilityResult = joint_feasibility(sharp, noisy)
    assert result.status == STATUS_FEASIBLE
    assert result.evaluations == 1
    assert result.best_start == 0


def test_noncommuting_projections_infeasible() -> None:
    result: FeasibilityResult = joint_feasibility(sharp_spin([1.0, 0.0, 0.0]), sharp_spin([0.0, 0.0, 1.0]))
    assert result.status == STATUS_INFEASIBLE
    assert result.witness is None
    assert result.residual > 1e-3


def test_witness_reproduces_marginals() -> None:
    first: DiscretePOVM = binary_povm(QubitBloch(0.5, [0.3, 0.0, 0.0]))
    second: DiscretePOVM = binary_povm(QubitBloch(0.5, [0.0, 0.3, 0.0]))
    result: FeasibilityResult = joint_feasibility(first, second)
    assert result.feasible
    assert result.witness is not None
    assert validate(result.witness.flatten(), WITNESS_TOL)
    rows, cols = marginals(result.witness)
    assert rows.labels == first.labels
    assert cols.labels == second.labels
    assert povm_distance(rows, first) < 1e-9
    assert povm_distance(cols, second) < 1e-9


def test_unbiased_boundary_pair() -> None:
    outside: float = np.sqrt(2.0) / 4.0 + 0.05
    first: DiscretePOVM = binary_povm(QubitBloch(0.5, [outside, 0.0, 0.0]))
    second: DiscretePOVM = binary_povm(QubitBloch(0.5, [0.0, outside, 0.0]))
    assert not coexist_unbiased([outside, 0.0, 0.0], [0.0, outside, 0.0]).coexistent
    assert not joint_feasibility(first, second).feasible


def test_agrees_with_closed_form() -> None:
    rng: np.random.Generator = np.random.default_rng(11)
    compared: int = 0
    while compared < 4:
        first, first_povm = random_binary_qubit_povm(rng)
        second, second_povm = random_binary_qubit_povm(rng)
        report: CoexistenceReport = coexist_qubit(first, second)
        if abs(report.margin) <= 0.1:
            continue
        result: FeasibilityResult = joint_feasibility(first_povm, second_povm, FeasibilityConfig(seed=3))
        assert result.feasible == report.coexistent
        compared += 1


def test_seeded_search_is_deterministic() -> None:
    first: DiscretePOVM = binary_povm(QubitBloch(0.5, [0.4, 0.0, 0.0]))
    second: DiscretePOVM = binary_povm(QubitBloch(0.5, [0.0, 0.0, 0.4]))
    one: FeasibilityResult = joint_feasibility(first, second, FeasibilityConfig(seed=5))
    two: FeasibilityResult = joint_feasibility(first, second, FeasibilityConfig(seed=5))
    assert feasibility_to_dict(one) == feasibility_to_dict(two)


def test_result_dict() -> None:
    result: FeasibilityResult = joint_feasibility(sharp_spin([1.0, 0.0, 0.0]), sharp_spin([0.0, 0.0, 1.0]))
    data: dict = feasibility_to_dict(result)
    assert set(data) == {"feasible", "status", "residual", "objective", "evaluations", "best_start"}
    assert data["feasible"] is False
