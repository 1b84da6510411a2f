import logging
import math
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from numpy.typing import ArrayLike

from constants import DEFAULT_QUAD_ORDER, DIRECTION_TOL, EQUALITY_TOL, QUADRATURE_WEIGHT_TOL
from exceptions import InvalidDirectionException, InvalidQuadratureException, NonBinaryPovmException
from linalg_core import PAULI, Effect, HermitianMatrix, identity, matrix_to_bloch, spin_projector
from povm import DiscretePOVM, JointPOVM, StochasticMatrix, UnsmearResult, marginals, require_valid, unsmear

logger: logging.Logger = logging.getLogger(__name__)

SPIN_LABELS: tuple[str, str] = ("+", "-")

Region = Callable[[np.ndarray], bool]


class Direction:
    """
    Unit vector in R^3.
    """

    def __init__(self, vector: ArrayLike) -> None:
        values: np.ndarray = np.asarray(vector, dtype=np.float64).reshape(-1)
        if values.shape != (3,) or abs(float(np.linalg.norm(values)) - 1.0) > DIRECTION_TOL:
            raise InvalidDirectionException(f"Got {values.tolist()}.")
        values.setflags(write=False)
        self.vector: np.ndarray = values

    @classmethod
    def normalized(cls, vector: ArrayLike) -> "Direction":
        values: np.ndarray = np.asarray(vector, dtype=np.float64).reshape(-1)
        length: float = float(np.linalg.norm(values))
        if values.shape != (3,) or length == 0.0:
            raise InvalidDirectionException(f"Cannot normalize {values.tolist()}.")
        return cls(values / length)

    def __repr__(self) -> str:
        return f"Direction({self.vector.tolist()!r})"


def _rotation_to(pole: np.ndarray) -> np.ndarray:
    """
    Rotation matrix taking e3 to pole (Rodrigues formula).
    """
    axis: np.ndarray = np.cross([0.0, 0.0, 1.0], pole)
    sine: float = float(np.linalg.norm(axis))
    cosine: float = float(pole[2])
    if sine < DIRECTION_TOL:
        return np.eye(3) if cosine > 0 else np.diag([1.0, -1.0, -1.0])
    cross: np.ndarray = np.array(
        [
            [0.0, -axis[2], axis[1]],
            [axis[2], 0.0, -axis[0]],
            [-axis[1], axis[0], 0.0],
        ]
    )
    return np.eye(3) + cross + cross @ cross * ((1.0 - cosine) / (sine * sine))


class SphereQuadrature:
    """
    Product rule on the unit sphere: Gauss-Legendre in cos(theta) split into the panels [-1, 0] and [0, 1] of order/2
    nodes each, times a uniform trapezoid of 2 * order nodes in phi. Weights sum to 4 pi.
    """

    def __init__(self, order: int = DEFAULT_QUAD_ORDER, pole: Optional[Direction] = None) -> None:
        if order < 2 or order % 2 != 0:
            raise InvalidQuadratureException(f"Order must be even and at least 2, got {order}.")
        self.order: int = order
        self.pole: Direction = pole if pole is not None else Direction([0.0, 0.0, 1.0])

        roots, panel_weights = leggauss(order // 2)
        heights: np.ndarray = np.concatenate([(roots - 1.0) / 2.0, (roots + 1.0) / 2.0])
        height_weights: np.ndarray = np.concatenate([panel_weights, panel_weights]) / 2.0
        azimuths: np.ndarray = 2.0 * np.pi * np.arange(2 * order) / (2 * order)

        height_grid, azimuth_grid = np.meshgrid(heights, azimuths, indexing="ij")
        radius: np.ndarray = np.sqrt(1.0 - height_grid**2)
        local: np.ndarray = np.stack(
            [radius * np.cos(azimuth_grid), radius * np.sin(azimuth_grid), height_grid], axis=-1
        ).reshape(-1, 3)
        self.nodes: np.ndarray = local @ _rotation_to(self.pole.vector).T
        self.weights: np.ndarray = np.repeat(height_weights, 2 * order) * (2.0 * np.pi / (2 * order))

        total: float = math.fsum(self.weights)
        if abs(total - 4.0 * np.pi) > QUADRATURE_WEIGHT_TOL or np.any(self.weights < 0):
            raise InvalidQuadratureException(f"Weights sum to {total!r}.")

    def rotated(self, pole: Direction) -> "SphereQuadrature":
        """
        Same rule with its polar axis along pole.
        """
        return SphereQuadrature(self.order, pole)

    def __len__(self) -> int:
        return len(self.weights)

    def __repr__(self) -> str:
        return f"SphereQuadrature(order={self.order}, pole={self.pole.vector.tolist()!r})"


def build_spin_joint() -> JointPOVM:
    """
    G_jk = 1/4 (I + n_jk . sigma) with n_jk = (j e1 + k e2) / sqrt(2), j, k in {+, -}.
    """
    operators: list[list[HermitianMatrix]] = []
    for j in (1.0, -1.0):
        row: list[HermitianMatrix] = []
        for k in (1.0, -1.0):
            direction: np.ndarray = np.array([j, k, 0.0]) / math.sqrt(2.0)
            row.append(0.5 * spin_projector(direction))
        operators.append(row)
    return JointPOVM(SPIN_LABELS, SPIN_LABELS, operators)


def spin_marginals(joint: JointPOVM) -> tuple[DiscretePOVM, DiscretePOVM]:
    require_valid(joint.flatten())
    return marginals(joint)


def sharp_spin(direction: ArrayLike) -> DiscretePOVM:
    unit: Direction = Direction(direction)
    return DiscretePOVM(SPIN_LABELS, [spin_projector(unit.vector, 1), spin_projector(unit.vector, -1)])


def smearing_contrast(povm: DiscretePOVM) -> tuple[float, Direction]:
    """
    Contrast c and axis n of an unbiased binary qubit observable {1/2 (I + c n . sigma), 1/2 (I - c n . sigma)}.
    """
    if not povm.is_binary or povm.dim != 2:
        raise NonBinaryPovmException(f"Expected a binary qubit observable, got {len(povm)} outcomes.")
    require_valid(povm)
    bloch = matrix_to_bloch(povm.operators[0])
    if abs(bloch.a0 - 0.5) > EQUALITY_TOL:
        raise NonBinaryPovmException(f"Observable is biased, a0 = {bloch.a0!r}.")
    contrast: float = 2.0 * bloch.norm
    if contrast == 0.0:
        return 0.0, Direction([0.0, 0.0, 1.0])
    return contrast, Direction.normalized(bloch.a)


def reconstruct_sharp(povm: DiscretePOVM) -> UnsmearResult:
    """
    Recover {P+, P-} from E_+- = 1/2 (1 +- c) P+ + 1/2 (1 -+ c) P- by inverting the symmetric 2x2 smearing matrix.

    Args:
        povm (DiscretePOVM): Unbiased binary qubit observable.

    Returns:
        Sharp projections and the inverse smearing coefficients.
    """
    contrast, _ = smearing_contrast(povm)
    result: UnsmearResult = unsmear(povm, StochasticMatrix.symmetric_binary(contrast), povm.labels)
    logger.debug(f"Sharp reconstruction with contrast {contrast!r}: coefficients {result.coefficients.tolist()}.")
    return result


def sphere_effect(region: Region, quadrature: SphereQuadrature) -> Effect:
    """
    M(Z) = 1/(2 pi) sum over nodes n in Z of w 1/2 (I + n . sigma). Indicator is evaluated at the nodes.
    """
    if len(quadrature) == 0:
        raise InvalidQuadratureException("No nodes.")
    mask: np.ndarray = np.array([bool(region(node)) for node in quadrature.nodes], dtype=bool)
    weights: np.ndarray = quadrature.weights[mask]
    first_moment: np.ndarray = weights @ quadrature.nodes[mask] if len(weights) > 0 else np.zeros(3)
    array: np.ndarray = 0.5 * math.fsum(weights) * np.eye(2, dtype=np.complex128)
    for component, sigma in zip(first_moment, PAULI):
        array = array + 0.5 * component * sigma
    return Effect.of(HermitianMatrix.hermitized(array / (2.0 * np.pi)))


def hemisphere_marginal(direction: Direction, quadrature: Optional[SphereQuadrature] = None) -> DiscretePOVM:
    """
    {M(n . m > 0), M(n . m < 0)}, integrated in the rule rotated so that its pole is n.
    """
    rule: SphereQuadrature = (quadrature if quadrature is not None else SphereQuadrature()).rotated(direction)
    axis: np.ndarray = direction.vector
    upper: Effect = sphere_effect(lambda node: float(node @ axis) > 0.0, rule)
    lower: HermitianMatrix = identity(2) - upper
    return DiscretePOVM(SPIN_LABELS, [upper, lower])
