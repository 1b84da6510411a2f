import logging
import math
from typing import Any, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from constants import UNCERTAINTY_BOUND, UNCERTAINTY_SLACK
from exceptions import InvalidGeneratorException
from moments import (
    Grid,
    GridDistribution,
    MomentSequence,
    WaveFunction,
    convolve,
    gaussian_state,
    hermite_state,
    max_relative_error,
    moment,
    moment_sequence,
    momentum_amplitudes,
    momentum_distribution,
    position_distribution,
    reconstruct_moments,
)

logger: logging.Logger = logging.getLogger(__name__)

WEIGHT_SUM_TOL = 1e-12
SYMMETRY_TOL = 1e-12


class GeneratingOperator:
    """
    T = sum_i t_i |eta_i><eta_i| given by its weights and normalized components, all on one grid symmetric about 0.
    """

    def __init__(self, weights: ArrayLike, components: Sequence[WaveFunction]) -> None:
        values: np.ndarray = np.asarray(weights, dtype=np.float64).reshape(-1)
        if len(values) == 0 or len(values) != len(components):
            raise InvalidGeneratorException(f"Got {len(values)} weights for {len(components)} components.")
        if np.any(values < 0) or abs(math.fsum(values) - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidGeneratorException(f"Weights {values.tolist()} are not a probability vector.")
        reference: WaveFunction = components[0]
        for index, component in enumerate(components):
            if len(component) != len(reference) or component.x0 != reference.x0 or component.dx != reference.dx:
                raise InvalidGeneratorException(f"Component {index} lives on a different grid.")
        if abs(reference.x0 + (len(reference) - 1) * reference.dx / 2.0) > SYMMETRY_TOL * max(1.0, abs(reference.x0)):
            raise InvalidGeneratorException(f"Grid starting at {reference.x0!r} is not symmetric about 0.")
        self.weights: np.ndarray = values
        self.components: list[WaveFunction] = list(components)

    def is_orthonormal(self, tol: float = 1e-8) -> bool:
        gram: np.ndarray = np.array([[first.inner(second) for second in self.components] for first in self.components])
        return bool(np.max(np.abs(gram - np.eye(len(self.components)))) < tol)

    def __len__(self) -> int:
        return len(self.components)


class MarginalDensities:
    def __init__(self, position: GridDistribution, momentum: GridDistribution) -> None:
        self.position: GridDistribution = position
        self.momentum: GridDistribution = momentum

    @property
    def f(self) -> GridDistribution:
        return self.position

    @property
    def g(self) -> GridDistribution:
        return self.momentum


class UncertaintyCheck:
    def __init__(self, position_variance: float, momentum_variance: float, slack: float = UNCERTAINTY_SLACK) -> None:
        self.position_variance: float = position_variance
        self.momentum_variance: float = momentum_variance
        self.product: float = position_variance * momentum_variance
        self.satisfied: bool = self.product >= UNCERTAINTY_BOUND - slack

    def to_dict(self) -> dict[str, Any]:
        return {
            "variance_f": self.position_variance,
            "variance_g": self.momentum_variance,
            "product": self.product,
            "satisfied": self.satisfied,
        }


def _reflected_position(component: WaveFunction) -> np.ndarray:
    return (np.abs(component.amplitudes) ** 2 * component.dx)[::-1]


def _reflected_momentum(component: WaveFunction) -> tuple[float, float, np.ndarray]:
    p0, dp, amplitudes = momentum_amplitudes(component)
    return p0, dp, (np.abs(amplitudes) ** 2 * dp)[::-1]


def marginal_densities(generator: GeneratingOperator) -> MarginalDensities:
    """
    Cartesian marginal densities f(q) = sum_i t_i |eta_i(-q)|^2 and g(p) = sum_i t_i |eta^_i(-p)|^2.
    Reflection is index reversal on the symmetric grids.

    Args:
        generator (GeneratingOperator): Spectral data of T.

    Returns:
        Position smearing density f and momentum smearing density g.
    """
    reference: WaveFunction = generator.components[0]
    position: np.ndarray = np.zeros(len(reference))
    momentum: np.ndarray = np.zeros(len(reference))
    p0: float = 0.0
    dp: float = 1.0
    for weight, component in zip(generator.weights, generator.components):
        position += weight * _reflected_position(component)
        p0, dp, reflected = _reflected_momentum(component)
        momentum += weight * reflected
    return MarginalDensities(
        GridDistribution.normalized(reference.x0, reference.dx, position),
        GridDistribution.normalized(p0, dp, momentum),
    )


def variance(distribution: GridDistribution) -> float:
    mean: float = moment(distribution, 1)
    return moment(distribution, 2) - mean * mean


def uncertainty_check(densities: MarginalDensities, slack: float = UNCERTAINTY_SLACK) -> UncertaintyCheck:
    """
    Var(f) Var(g) >= 1/4 - slack with hbar = 1.
    """
    check: UncertaintyCheck = UncertaintyCheck(variance(densities.position), variance(densities.momentum), slack)
    logger.debug(f"Uncertainty product {check.product!r}, satisfied: {check.satisfied}.")
    return check


class IndirectMeasurementResult:
    def __init__(
        self,
        position_sharp: MomentSequence,
        position_reconstructed: MomentSequence,
        momentum_sharp: MomentSequence,
        momentum_reconstructed: MomentSequence,
    ) -> None:
        order: int = position_sharp.order
        self.position_sharp: MomentSequence = position_sharp
        self.position_reconstructed: MomentSequence = position_reconstructed
        self.momentum_sharp: MomentSequence = momentum_sharp
        self.momentum_reconstructed: MomentSequence = momentum_reconstructed
        self.position_error: float = max_relative_error(position_reconstructed, position_sharp, order)
        self.momentum_error: float = max_relative_error(momentum_reconstructed, momentum_sharp, order)

    def to_dict(self) -> dict[str, Any]:
        return {
            "position_sharp": list(self.position_sharp),
            "position_reconstructed": list(self.position_reconstructed),
            "position_error": self.position_error,
            "momentum_sharp": list(self.momentum_sharp),
            "momentum_reconstructed": list(self.momentum_reconstructed),
            "momentum_error": self.momentum_error,
        }


def indirect_measurement(wave: WaveFunction, generator: GeneratingOperator, order: int) -> IndirectMeasurementResult:
    """
    Both sharp moment sequences of a state recovered from the two marginal statistics of the phase space observable
    generated by T: position from f * |psi|^2, momentum from g * |psi^|^2.

    Args:
        wave (WaveFunction): Measured state, on the grid of the generator components.
        generator (GeneratingOperator): Generating operator T.
        order (int): Highest moment order.

    Returns:
        Direct and reconstructed moments with their maximal relative errors.
    """
    densities: MarginalDensities = marginal_densities(generator)
    sharp_position: GridDistribution = position_distribution(wave)
    sharp_momentum: GridDistribution = momentum_distribution(wave)

    position_reconstructed: MomentSequence = reconstruct_moments(
        moment_sequence(convolve(densities.position, sharp_position), order),
        moment_sequence(densities.position, order),
        order,
    )
    momentum_reconstructed: MomentSequence = reconstruct_moments(
        moment_sequence(convolve(densities.momentum, sharp_momentum), order),
        moment_sequence(densities.momentum, order),
        order,
    )
    result: IndirectMeasurementResult = IndirectMeasurementResult(
        moment_sequence(sharp_position, order),
        position_reconstructed,
        moment_sequence(sharp_momentum, order),
        momentum_reconstructed,
    )
    logger.info(
        f"Indirect measurement: position error {result.position_error:.3e}, "
        f"momentum error {result.momentum_error:.3e}."
    )
    return result


def gaussian_generator(width: float = 1.0, grid: Optional[Grid] = None) -> GeneratingOperator:
    return GeneratingOperator([1.0], [gaussian_state(width, grid)])


def hermite_generator(n: int, grid: Optional[Grid] = None) -> GeneratingOperator:
    return GeneratingOperator([1.0], [hermite_state(n, grid)])


def random_gaussian_mixture(
    rng: np.random.Generator, grid: Optional[Grid] = None, max_components: int = 3
) -> GeneratingOperator:
    """
    Mixture of displaced, boosted Gaussians: widths in [0.5, 2], centres and boosts in [-2, 2], Dirichlet weights.
    """
    count: int = int(rng.integers(1, max_components + 1))
    weights: np.ndarray = rng.dirichlet(np.ones(count))
    weights /= math.fsum(weights)
    components: list[WaveFunction] = [
        gaussian_state(
            float(rng.uniform(0.5, 2.0)),
            grid,
            center=float(rng.uniform(-2.0, 2.0)),
            momentum=float(rng.uniform(-2.0, 2.0)),
        )
        for _ in range(count)
    ]
    return GeneratingOperator(weights, components)
