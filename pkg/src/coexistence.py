import logging
import math
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from constants import EFFECT_TOL, MARGIN_TOL
from exceptions import InvalidBlochException
from linalg_core import HermitianMatrix, QubitBloch, bloch_to_matrix, matrix_to_bloch
from povm import DiscretePOVM

logger: logging.Logger = logging.getLogger(__name__)


class CoexistenceReport:
    """
    Verdict of a closed-form qubit coexistence test: coexistent iff lhs - rhs >= -tol.
    """

    def __init__(self, lhs: float, rhs: float, helpers: dict[str, float], tol: float = MARGIN_TOL) -> None:
        self.lhs: float = lhs
        self.rhs: float = rhs
        self.margin: float = lhs - rhs
        self.coexistent: bool = self.margin >= -tol
        self.helpers: dict[str, float] = helpers

    def to_dict(self) -> dict[str, Any]:
        return {
            "coexistent": self.coexistent,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "helpers": dict(self.helpers),
        }

    def __repr__(self) -> str:
        return f"CoexistenceReport(coexistent={self.coexistent}, margin={self.margin!r})"


def _radicands(effect: QubitBloch, tol: float = EFFECT_TOL) -> tuple[float, float]:
    """
    sqrt(a0^2 - |a|^2) and sqrt((1 - a0)^2 - |a|^2). Effects accepted within tol sit on the validity boundary, their
    negative radicands are clamped to 0.
    """
    if not effect.is_effect(tol):
        raise InvalidBlochException(f"|a| = {effect.norm!r} exceeds min(a0, 1 - a0) for a0 = {effect.a0!r}.")
    length_squared: float = float(np.dot(effect.a, effect.a))
    lower: float = effect.a0 * effect.a0 - length_squared
    upper: float = (1.0 - effect.a0) ** 2 - length_squared
    return math.sqrt(max(lower, 0.0)), math.sqrt(max(upper, 0.0))


def unsharpness(effect: QubitBloch, tol: float = EFFECT_TOL) -> float:
    """
    phi(A) in [0, 1]: 0 for projections, 1 for multiples of the identity.
    """
    lower, upper = _radicands(effect, tol)
    return lower + upper


def bias(effect: QubitBloch, tol: float = EFFECT_TOL) -> tuple[float, float]:
    """
    Bias measures of a qubit effect.

    Args:
        effect (QubitBloch): Valid qubit effect.
        tol (float): Slack of the effect bounds.

    Returns:
        beta(A) and x = 2 a0 - 1, related by phi(A) beta(A) = x.
    """
    lower, upper = _radicands(effect, tol)
    return lower - upper, 2.0 * effect.a0 - 1.0


def coexist_qubit(
    first: QubitBloch, second: QubitBloch, tol: float = MARGIN_TOL, effect_tol: float = EFFECT_TOL
) -> CoexistenceReport:
    """
    Closed-form coexistence test for two qubit effects (general biased case):
    1/2 [F (2 - B) + B (2 - F)] + (x y - 4 a.b)^2 >= 1.

    Args:
        first (QubitBloch): Effect A.
        second (QubitBloch): Effect B.
        tol (float): Margin slack counted as coexistent.
        effect_tol (float): Slack of the effect bounds of both inputs.

    Returns:
        Report with both sides, the margin and the intermediate quantities.
    """
    phi_a: float = unsharpness(first, effect_tol)
    phi_b: float = unsharpness(second, effect_tol)
    beta_a, x = bias(first, effect_tol)
    beta_b, y = bias(second, effect_tol)

    f_script: float = phi_a * phi_a + phi_b * phi_b
    b_script: float = beta_a * beta_a + beta_b * beta_b
    overlap: float = float(np.dot(first.a, second.a))
    lhs: float = 0.5 * (f_script * (2.0 - b_script) + b_script * (2.0 - f_script)) + (x * y - 4.0 * overlap) ** 2

    helpers: dict[str, float] = {
        "F_script": f_script,
        "B_script": b_script,
        "x": x,
        "y": y,
        "phi_A": phi_a,
        "phi_B": phi_b,
        "beta_A": beta_a,
        "beta_B": beta_b,
    }
    report: CoexistenceReport = CoexistenceReport(lhs, 1.0, helpers, tol)
    logger.debug(f"Qubit coexistence: {report}")
    return report


def coexist_unbiased(
    a: ArrayLike, b: ArrayLike, tol: float = MARGIN_TOL, effect_tol: float = EFFECT_TOL
) -> CoexistenceReport:
    """
    Unbiased case a0 = b0 = 1/2: 16 |a x b|^2 <= (1 - 4|a|^2)(1 - 4|b|^2).

    The report puts the unsharpness product on the left so that the margin has the same sign as coexist_qubit.
    """
    first: np.ndarray = np.asarray(a, dtype=np.float64).reshape(3)
    second: np.ndarray = np.asarray(b, dtype=np.float64).reshape(3)
    for name, vector in (("a", first), ("b", second)):
        if np.linalg.norm(vector) > 0.5 + effect_tol:
            raise InvalidBlochException(f"|{name}| = {np.linalg.norm(vector)!r} exceeds 1/2.")

    unsharp_a: float = 1.0 - 4.0 * float(np.dot(first, first))
    unsharp_b: float = 1.0 - 4.0 * float(np.dot(second, second))
    cross: np.ndarray = np.cross(first, second)
    noncommutativity: float = 16.0 * float(np.dot(cross, cross))

    helpers: dict[str, float] = {
        "unsharpness_A": unsharp_a,
        "unsharpness_B": unsharp_b,
        "cross_squared": float(np.dot(cross, cross)),
    }
    return CoexistenceReport(unsharp_a * unsharp_b, noncommutativity, helpers, tol)


def coexist_qubit_effects(
    first: HermitianMatrix, second: HermitianMatrix, tol: float = MARGIN_TOL, effect_tol: float = EFFECT_TOL
) -> CoexistenceReport:
    return coexist_qubit(matrix_to_bloch(first), matrix_to_bloch(second), tol, effect_tol)


def random_qubit_effect(rng: np.random.Generator) -> QubitBloch:
    """
    a0 uniform in [0, 1], |a| uniform in [0, min(a0, 1 - a0)], direction uniform on the sphere.
    """
    a0: float = float(rng.uniform())
    direction: np.ndarray = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    radius: float = float(rng.uniform()) * min(a0, 1.0 - a0)
    return QubitBloch(a0, radius * direction)


def binary_povm(effect: QubitBloch, tol: float = EFFECT_TOL) -> DiscretePOVM:
    """
    {A, I - A} for a qubit effect A in Bloch form, labelled "+" and "-".
    """
    if not effect.is_effect(tol):
        raise InvalidBlochException(f"{effect} is not an effect.")
    return DiscretePOVM(("+", "-"), [bloch_to_matrix(effect), bloch_to_matrix(effect.complement())])


def random_binary_qubit_povm(rng: np.random.Generator) -> tuple[QubitBloch, DiscretePOVM]:
    effect: QubitBloch = random_qubit_effect(rng)
    return effect, binary_povm(effect)
