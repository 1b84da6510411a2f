import numpy as np
import pytest

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
from linalg_core import DensityState, HermitianMatrix, identity, random_density_state, random_unitary
from povm import (
    DiscretePOVM,
    JointPOVM,
    OutcomeMap,
    StochasticMatrix,
    UnsmearResult,
    born,
    commutes,
    image,
    informationally_equivalent,
    is_projection_valued,
    is_regular,
    joint_from_functions,
    luders,
    marginals,
    max_commutator_norm,
    povm_distance,
    product_joint,
    range_effects,
    range_inclusion,
    require_valid,
    smear,
    unsmear,
    validate,
)
from qubit_models import sharp_spin


def computational_basis(dim: int) -> DiscretePOVM:
    return DiscretePOVM.from_orthonormal_basis(np.eye(dim))


def test_construction_checks() -> None:
    with pytest.raises(InvalidPovmException):
        DiscretePOVM(["a", "a"], [identity(2), identity(2)])
    with pytest.raises(InvalidPovmException):
        DiscretePOVM(["a"], [identity(2), identity(2)])
    with pytest.raises(DimensionMismatchException):
        DiscretePOVM(["a", "b"], [identity(2), identity(3)])


def test_validate() -> None:
    assert validate(sharp_spin([0.0, 0.0, 1.0]))
    incomplete = validate(DiscretePOVM(["only"], [0.5 * identity(2)]))
    assert not incomplete
    assert "sum" in incomplete.violation
    negative = validate(DiscretePOVM.from_arrays(["a", "b"], [np.diag([-0.5, 0.0]), np.diag([1.5, 1.0])]))
    assert not negative
    assert negative.index == 0
    with pytest.raises(InvalidPovmException):
        require_valid(DiscretePOVM(["only"], [0.5 * identity(2)]))


def test_born_probabilities(rng: np.random.Generator) -> None:
    povm: DiscretePOVM = DiscretePOVM.from_orthonormal_basis(random_unitary(rng, 3))
    probabilities: np.ndarray = born(random_density_state(rng, 3), povm)
    assert probabilities.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(probabilities >= -1e-15)
    with pytest.raises(DimensionMismatchException):
        born(random_density_state(rng, 2), povm)


def test_stochastic_matrix_checks() -> None:
    with pytest.raises(InvalidStochasticMatrixException):
        StochasticMatrix([[1.2, 0.0], [-0.2, 1.0]])
    with pytest.raises(InvalidStochasticMatrixException):
        StochasticMatrix([[0.5, 0.5], [0.4, 0.5]])


def test_smear_then_unsmear() -> None:
    sharp: DiscretePOVM = sharp_spin([1.0, 0.0, 0.0])
    noise: StochasticMatrix = StochasticMatrix.symmetric_binary(0.6)
    smeared: DiscretePOVM = smear(sharp, noise, sharp.labels)
    assert validate(smeared)
    assert not is_projection_valued(smeared)
    recovered: UnsmearResult = unsmear(smeared, noise, sharp.labels)
    assert povm_distance(recovered.povm, sharp) < 1e-12
    assert recovered.condition_number == pytest.approx(1.0 / 0.6)


def test_smearing_shape_errors() -> None:
    sharp: DiscretePOVM = sharp_spin([0.0, 0.0, 1.0])
    with pytest.raises(ShapeMismatchException):
        smear(sharp, StochasticMatrix(np.full((2, 3), 1.0 / 2.0)))
    with pytest.raises(ShapeMismatchException):
        unsmear(sharp, StochasticMatrix(np.full((3, 3), 1.0 / 3.0)))
    with pytest.raises(SingularSmearingException):
        unsmear(sharp, StochasticMatrix.symmetric_binary(0.0))


def test_outcome_map() -> None:
    with pytest.raises(PartialOutcomeMapException):
        OutcomeMap({0: "a"}, ["b"])
    parity: OutcomeMap = OutcomeMap({0: "even", 1: "odd", 2: "even"})
    assert parity.targets == ("even", "odd")
    with pytest.raises(PartialOutcomeMapException):
        parity(3)
    composed: OutcomeMap = parity.then(OutcomeMap.constant(["even", "odd"]))
    assert composed(1) == "all"


def test_image_of_composed_map(rng: np.random.Generator) -> None:
    for _ in range(50):
        sharp: DiscretePOVM = DiscretePOVM.from_orthonormal_basis(random_unitary(rng, 4))
        noisy: DiscretePOVM = smear(sharp, StochasticMatrix(rng.dirichlet(np.ones(5), size=4).T), range(5))
        first: OutcomeMap = OutcomeMap({k: int(rng.integers(0, 3)) for k in range(5)}, [0, 1, 2])
        second: OutcomeMap = OutcomeMap({k: "ab"[int(rng.integers(0, 2))] for k in range(3)}, ["a", "b"])
        direct: DiscretePOVM = image(noisy, first.then(second))
        stepwise: DiscretePOVM = image(image(noisy, first), second)
        assert direct.labels == stepwise.labels
        assert povm_distance(direct, stepwise) < 1e-12


def test_image_and_range() -> None:
    sharp: DiscretePOVM = computational_basis(3)
    coarse: DiscretePOVM = image(sharp, OutcomeMap({0: 0, 1: 0, 2: 1}, [0, 1]))
    np.testing.assert_allclose(coarse.effect(0).array, np.diag([1.0, 1.0, 0.0]))
    assert len(range_effects(coarse)) == 4

    included = range_inclusion(coarse, sharp)
    assert included
    assert included.witness[frozenset({0})] == frozenset({0, 1})

    excluded = range_inclusion(sharp, coarse)
    assert not excluded
    assert excluded.missing == frozenset({0})


def test_too_many_outcomes() -> None:
    labels: list[int] = list(range(17))
    povm: DiscretePOVM = DiscretePOVM(labels, [HermitianMatrix([[1.0 / 17.0]]) for _ in labels])
    with pytest.raises(TooManyOutcomesException):
        range_effects(povm)


def test_regularity() -> None:
    assert is_regular(sharp_spin([0.0, 0.0, 1.0]))
    assert is_regular(smear(sharp_spin([0.0, 0.0, 1.0]), StochasticMatrix.symmetric_binary(0.5)))
    trivial: DiscretePOVM = DiscretePOVM(["low", "high"], [0.3 * identity(2), 0.7 * identity(2)])
    assert not is_regular(trivial)


def test_product_joint_of_commuting_observables() -> None:
    sharp: DiscretePOVM = sharp_spin([0.0, 0.0, 1.0])
    noisy: DiscretePOVM = smear(sharp, StochasticMatrix.symmetric_binary(0.3))
    assert commutes(sharp, noisy)
    joint: JointPOVM = product_joint(sharp, noisy)
    assert validate(joint.flatten())
    rows, cols = marginals(joint)
    assert povm_distance(rows, sharp) < 1e-12
    assert povm_distance(cols, noisy) < 1e-12


def test_product_joint_rejects_noncommuting() -> None:
    first: DiscretePOVM = sharp_spin([1.0, 0.0, 0.0])
    second: DiscretePOVM = sharp_spin([0.0, 0.0, 1.0])
    assert max_commutator_norm(first, second) > 0.5
    with pytest.raises(NonCommutingException):
        product_joint(first, second)


def test_joint_from_functions() -> None:
    sharp: DiscretePOVM = computational_basis(4)
    high: OutcomeMap = OutcomeMap({k: k // 2 for k in range(4)}, [0, 1])
    low: OutcomeMap = OutcomeMap({k: k % 2 for k in range(4)}, [0, 1])
    joint: JointPOVM = joint_from_functions(sharp, high, low)
    rows, cols = marginals(joint)
    assert povm_distance(rows, image(sharp, high)) < 1e-15
    assert povm_distance(cols, image(sharp, low)) < 1e-15
    np.testing.assert_allclose(joint.effect(1, 0).array, np.diag([0.0, 0.0, 1.0, 0.0]))


def test_luders() -> None:
    up: DensityState = DensityState.pure([1.0, 0.0])
    sharp: DiscretePOVM = sharp_spin([0.0, 0.0, 1.0])
    kept = luders(up, sharp.effect("+"))
    assert kept.probability == pytest.approx(1.0)
    np.testing.assert_allclose(kept.state.array, up.array, atol=1e-12)
    lost = luders(up, sharp.effect("-"))
    assert lost.state is None
    assert lost.probability == pytest.approx(0.0, abs=1e-15)


def test_luders_posterior_is_state(rng: np.random.Generator) -> None:
    noisy: DiscretePOVM = smear(sharp_spin([0.0, 1.0, 0.0]), StochasticMatrix.symmetric_binary(0.4))
    posterior = luders(random_density_state(rng, 2), noisy.operators[0])
    assert posterior.state is not None
    assert posterior.state.trace() == pytest.approx(1.0, abs=1e-12)


def test_informational_equivalence() -> None:
    sharp: DiscretePOVM = sharp_spin([0.0, 0.0, 1.0])
    noisy: DiscretePOVM = smear(sharp, StochasticMatrix.symmetric_binary(0.5))
    assert informationally_equivalent(sharp, noisy)
    assert not informationally_equivalent(sharp, sharp_spin([1.0, 0.0, 0.0]))
