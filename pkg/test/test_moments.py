import math

import numpy as np
import pytest

from exceptions import (
    GridSpacingMismatchException,
    GridTooSmallException,
    InsufficientMomentsException,
    InvalidDistributionException,
    RunConfigException,
)
from moments import (
    Grid,
    GridDistribution,
    MomentSequence,
    WaveFunction,
    convolve,
    forward_moments,
    gaussian_distribution,
    gaussian_state,
    growth_check,
    hermite_state,
    max_relative_error,
    moment,
    moment_sequence,
    momentum_distribution,
    point_mass,
    position_distribution,
    reconstruct_moments,
    translate,
)


def test_grid_is_symmetric(grid: Grid) -> None:
    points: np.ndarray = grid.points
    assert grid.dx == pytest.approx(40.0 / 4096)
    assert points[0] == pytest.approx(-points[-1], abs=1e-12)
    assert grid.reach == pytest.approx(points[-1])
    with pytest.raises(RunConfigException):
        Grid(1, 1.0)


def test_distribution_checks() -> None:
    with pytest.raises(InvalidDistributionException):
        GridDistribution(0.0, 1.0, [0.5, -0.1, 0.6])
    with pytest.raises(InvalidDistributionException):
        GridDistribution(0.0, 1.0, [0.5, 0.4])
    with pytest.raises(InvalidDistributionException):
        GridDistribution(0.0, 0.0, [1.0])
    assert GridDistribution.normalized(0.0, 1.0, [1.0, 3.0]).weights.tolist() == [0.25, 0.75]


def test_moment_sequence_checks() -> None:
    with pytest.raises(InvalidDistributionException):
        MomentSequence([0.5, 0.0])
    with pytest.raises(InsufficientMomentsException):
        MomentSequence([1.0, 0.0]).require_order(4)


def test_point_mass_moments() -> None:
    moments: MomentSequence = moment_sequence(point_mass(2.0), 10)
    assert moments[0] == 1.0
    assert list(moments) == [2.0**k for k in range(11)]


def test_zero_width_gaussian_is_point_mass() -> None:
    mu: GridDistribution = gaussian_distribution(0.0, 0.1)
    assert len(mu) == 1
    assert mu.x0 == 0.0


def test_gaussian_distribution_variance() -> None:
    mu: GridDistribution = gaussian_distribution(0.5, 0.01)
    assert len(mu) % 2 == 1
    assert moment(mu, 1) == pytest.approx(0.0, abs=1e-14)
    assert moment(mu, 2) == pytest.approx(0.25, rel=1e-10)
    assert moment(mu, 4) == pytest.approx(3.0 * 0.25**2, rel=1e-8)
    with pytest.raises(InvalidDistributionException):
        gaussian_distribution(-1.0, 0.01)


@pytest.mark.parametrize("sigma", [math.nan, math.inf])
def test_gaussian_distribution_rejects_non_finite_width(sigma: float) -> None:
    with pytest.raises(InvalidDistributionException):
        gaussian_distribution(sigma, 0.01)
    with pytest.raises(InvalidDistributionException):
        gaussian_state(sigma)


def test_convolution_of_point_masses() -> None:
    shifted: GridDistribution = convolve(point_mass(1.0, 0.5), point_mass(2.0, 0.5))
    assert moment(shifted, 1) == pytest.approx(3.0)
    with pytest.raises(GridSpacingMismatchException):
        convolve(point_mass(0.0, 0.5), point_mass(0.0, 0.25))


def test_hermite_moments(grid: Grid) -> None:
    for n in range(5):
        moments: MomentSequence = moment_sequence(position_distribution(hermite_state(n, grid)), 4)
        assert moments[1] == pytest.approx(0.0, abs=1e-12)
        assert moments[2] == pytest.approx(n + 0.5, rel=1e-9)
        assert moments[4] == pytest.approx((6 * n * n + 6 * n + 3) / 4.0, rel=1e-9)


def test_hermite_functions_are_fourier_eigenfunctions(grid: Grid) -> None:
    for n in (0, 3):
        momentum: MomentSequence = moment_sequence(momentum_distribution(hermite_state(n, grid)), 2)
        assert momentum[2] == pytest.approx(n + 0.5, rel=1e-9)


def test_hermite_orthonormal(grid: Grid) -> None:
    states: list[WaveFunction] = [hermite_state(n, grid) for n in range(4)]
    gram: np.ndarray = np.array([[first.inner(second) for second in states] for first in states])
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-10)


def test_hermite_limits() -> None:
    with pytest.raises(RunConfigException):
        hermite_state(21)
    with pytest.raises(GridTooSmallException):
        hermite_state(0, Grid(64, 4.0))


def test_wave_function_must_be_normalized() -> None:
    with pytest.raises(InvalidDistributionException, match="squared norm"):
        WaveFunction(0.0, 0.5, [1.0, 2.0])


def test_boosted_gaussian(grid: Grid) -> None:
    state: WaveFunction = gaussian_state(2.0, grid, center=1.0, momentum=1.5)
    position: MomentSequence = moment_sequence(position_distribution(state), 2)
    momentum: MomentSequence = moment_sequence(momentum_distribution(state), 2)
    assert position[1] == pytest.approx(1.0, rel=1e-9)
    assert position[2] - position[1] ** 2 == pytest.approx(2.0, rel=1e-9)
    assert momentum[1] == pytest.approx(1.5, rel=1e-9)
    assert momentum[2] - momentum[1] ** 2 == pytest.approx(0.125, rel=1e-8)


def test_forward_then_reconstruct(grid: Grid) -> None:
    sharp: MomentSequence = moment_sequence(position_distribution(hermite_state(2, grid)), 8)
    mu: MomentSequence = moment_sequence(gaussian_distribution(0.5, grid.dx), 8)
    recovered: MomentSequence = reconstruct_moments(forward_moments(mu, sharp, 8), mu, 8)
    assert max_relative_error(recovered, sharp, 8) < 1e-12


@pytest.mark.parametrize("sigma", [0.0, 0.25, 1.0])
def test_reconstruct_from_smeared_statistics(grid: Grid, sigma: float) -> None:
    sharp: GridDistribution = position_distribution(hermite_state(3, grid))
    mu: GridDistribution = gaussian_distribution(sigma, grid.dx)
    recovered: MomentSequence = reconstruct_moments(moment_sequence(convolve(mu, sharp), 8), moment_sequence(mu, 8), 8)
    assert max_relative_error(recovered, moment_sequence(sharp, 8), 8) <= 1e-4


def test_reconstruct_needs_enough_moments(grid: Grid) -> None:
    short: MomentSequence = MomentSequence([1.0, 0.0, 0.5])
    with pytest.raises(InsufficientMomentsException):
        reconstruct_moments(short, short, 4)


def test_growth_check(grid: Grid) -> None:
    assert growth_check(moment_sequence(position_distribution(hermite_state(4, grid)), 12), 2.0, 2.0)
    violated = growth_check(moment_sequence(point_mass(10.0), 4), 1.0, 1.0)
    assert not violated
    assert violated.first_violation == 1


def test_translate(grid: Grid) -> None:
    state: WaveFunction = hermite_state(0, grid)
    moved: WaveFunction = translate(state, 256 * grid.dx)
    assert moment(position_distribution(moved), 1) == pytest.approx(256 * grid.dx, rel=1e-9)
    with pytest.raises(InvalidDistributionException):
        translate(state, 0.3 * grid.dx)
    with pytest.raises(GridTooSmallException):
        translate(state, 2000 * grid.dx)


def test_max_relative_error() -> None:
    reference: MomentSequence = MomentSequence([1.0, 0.0, 4.0])
    estimate: MomentSequence = MomentSequence([1.0, 0.5, 4.2])
    assert max_relative_error(estimate, reference, 2) == pytest.approx(0.5)
    assert math.isclose(max_relative_error(reference, reference, 2), 0.0)
