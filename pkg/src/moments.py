import logging
import math
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from constants import (
    DEFAULT_GRID_L,
    DEFAULT_GRID_N,
    HERMITE_NORM_DEFICIT,
    MAX_HERMITE_ORDER,
    NORMALIZATION_TOL,
)
from exceptions import (
    GridSpacingMismatchException,
    GridTooSmallException,
    InsufficientMomentsException,
    InvalidDistributionException,
    RunConfigException,
)

logger: logging.Logger = logging.getLogger(__name__)

COMPENSATED_ORDER = 8
MOMENT_ZERO_TOL = 1e-12
SPACING_TOL = 1e-12


class Grid:
    """
    Uniform grid symmetric about 0: x_i = x0 + i dx with x0 = -(n - 1) dx / 2 and dx = 2 L / n.
    """

    def __init__(self, n: int = DEFAULT_GRID_N, half_width: float = DEFAULT_GRID_L) -> None:
        if n < 2 or half_width <= 0:
            raise RunConfigException(f"Grid needs n >= 2 and L > 0, got n = {n}, L = {half_width!r}.")
        self.n: int = n
        self.half_width: float = half_width
        self.dx: float = 2.0 * half_width / n
        self.x0: float = -(n - 1) * self.dx / 2.0

    @property
    def points(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def reach(self) -> float:
        """
        Largest |x| on the grid.
        """
        return (self.n - 1) * self.dx / 2.0

    def __repr__(self) -> str:
        return f"Grid(n={self.n}, half_width={self.half_width!r})"


def make_grid(n: int = DEFAULT_GRID_N, half_width: float = DEFAULT_GRID_L) -> Grid:
    return Grid(n, half_width)


class GridDistribution:
    """
    Probability weights on x_i = x0 + i dx.
    """

    def __init__(self, x0: float, dx: float, weights: ArrayLike, tol: float = NORMALIZATION_TOL) -> None:
        values: np.ndarray = np.asarray(weights, dtype=np.float64).reshape(-1)
        if dx <= 0 or len(values) == 0:
            raise InvalidDistributionException(f"Need dx > 0 and at least one weight, got dx = {dx!r}.")
        if np.any(values < 0):
            raise InvalidDistributionException(f"Negative weight {float(values.min())!r}.")
        total: float = math.fsum(values)
        if abs(total - 1.0) > tol:
            raise InvalidDistributionException(f"Weights sum to {total!r}.")
        values.setflags(write=False)
        self.x0: float = float(x0)
        self.dx: float = float(dx)
        self.weights: np.ndarray = values

    @classmethod
    def normalized(cls, x0: float, dx: float, weights: ArrayLike) -> "GridDistribution":
        values: np.ndarray = np.clip(np.asarray(weights, dtype=np.float64).reshape(-1), 0.0, None)
        total: float = math.fsum(values)
        if total <= 0:
            raise InvalidDistributionException("All weights are zero.")
        return cls(x0, dx, values / total)

    @property
    def points(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(len(self.weights))

    def __len__(self) -> int:
        return len(self.weights)

    def __repr__(self) -> str:
        return f"GridDistribution(x0={self.x0!r}, dx={self.dx!r}, size={len(self.weights)})"


class MomentSequence:
    """
    Moments m[0..K] of a probability distribution, m[0] = 1.
    """

    def __init__(self, values: Sequence[float]) -> None:
        entries: tuple[float, ...] = tuple(float(value) for value in values)
        if len(entries) == 0 or abs(entries[0] - 1.0) > MOMENT_ZERO_TOL:
            raise InvalidDistributionException(f"Zeroth moment must be 1, got {entries[:1]}.")
        self.values: tuple[float, ...] = entries

    @property
    def order(self) -> int:
        return len(self.values) - 1

    def require_order(self, order: int) -> None:
        if self.order < order:
            raise InsufficientMomentsException(f"Have order {self.order}, need {order}.")

    def __getitem__(self, k: int) -> float:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __repr__(self) -> str:
        return f"MomentSequence({list(self.values)!r})"


class WaveFunction:
    """
    Complex amplitudes on a uniform grid with sum |psi|^2 dx = 1.
    """

    def __init__(self, x0: float, dx: float, amplitudes: ArrayLike, tol: float = NORMALIZATION_TOL) -> None:
        values: np.ndarray = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm: float = math.fsum(np.abs(values) ** 2) * dx
        if abs(norm - 1.0) > tol:
            raise InvalidDistributionException(f"Wave function has squared norm {norm!r}, expected 1.")
        values.setflags(write=False)
        self.x0: float = float(x0)
        self.dx: float = float(dx)
        self.amplitudes: np.ndarray = values

    @classmethod
    def normalized(cls, x0: float, dx: float, amplitudes: ArrayLike) -> "WaveFunction":
        values: np.ndarray = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm: float = math.fsum(np.abs(values) ** 2) * dx
        if norm <= 0:
            raise GridTooSmallException("Wave function vanishes on the grid.")
        return cls(x0, dx, values / math.sqrt(norm))

    @classmethod
    def on_grid(cls, grid: Grid, amplitudes: ArrayLike) -> "WaveFunction":
        return cls(grid.x0, grid.dx, amplitudes)

    @property
    def points(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(len(self.amplitudes))

    def inner(self, other: "WaveFunction") -> complex:
        """
        <self|other> by the rectangle rule.
        """
        return complex(np.vdot(self.amplitudes, other.amplitudes) * self.dx)

    def __len__(self) -> int:
        return len(self.amplitudes)


def moment(distribution: GridDistribution, k: int) -> float:
    """
    k-th moment, summed in order of increasing |x|; compensated summation from order 8 on.

    Args:
        distribution (GridDistribution): Probability weights.
        k (int): Order, k >= 0.

    Returns:
        sum_i w_i x_i^k, exactly 1 for k = 0.
    """
    if k < 0:
        raise InsufficientMomentsException(f"Negative order {k}.")
    if k == 0:
        return 1.0
    points: np.ndarray = distribution.points
    order: np.ndarray = np.argsort(np.abs(points), kind="stable")
    terms: np.ndarray = distribution.weights[order] * points[order] ** k
    if k >= COMPENSATED_ORDER:
        return math.fsum(terms)
    return float(np.sum(terms))


def moment_sequence(distribution: GridDistribution, order: int) -> MomentSequence:
    return MomentSequence([moment(distribution, k) for k in range(order + 1)])


def point_mass(x: float, dx: float = 1.0) -> GridDistribution:
    return GridDistribution(x, dx, [1.0])


def gaussian_distribution(sigma: float, dx: float, width: float = 12.0) -> GridDistribution:
    """
    Discretized centred Gaussian on an odd-length grid through 0, covering +-width sigma. sigma = 0 is the point mass
    at 0.
    """
    if not math.isfinite(sigma) or sigma < 0:
        raise InvalidDistributionException(f"Standard deviation must be finite and non-negative, got {sigma!r}.")
    if sigma == 0:
        return point_mass(0.0, dx)
    half: int = int(math.ceil(width * sigma / dx))
    points: np.ndarray = dx * np.arange(-half, half + 1)
    return GridDistribution.normalized(-half * dx, dx, np.exp(-0.5 * (points / sigma) ** 2))


def convolve(mu: GridDistribution, distribution: GridDistribution) -> GridDistribution:
    """
    Discrete convolution; the output grid starts at the sum of both left endpoints.
    """
    if abs(mu.dx - distribution.dx) > SPACING_TOL * max(mu.dx, distribution.dx):
        raise GridSpacingMismatchException(f"{mu.dx!r} != {distribution.dx!r}.")
    weights: np.ndarray = np.convolve(mu.weights, distribution.weights)
    return GridDistribution.normalized(mu.x0 + distribution.x0, distribution.dx, weights)


def forward_moments(mu: MomentSequence, sharp: MomentSequence, order: int) -> MomentSequence:
    """
    Moments of the convolution from the moments of both factors:
    conv[k] = sum_n C(k, n) mu[k - n] sharp[n].
    """
    mu.require_order(order)
    sharp.require_order(order)
    values: list[float] = [
        math.fsum(math.comb(k, n) * mu[k - n] * sharp[n] for n in range(k + 1)) for k in range(order + 1)
    ]
    return MomentSequence(values)


def reconstruct_moments(convolved: MomentSequence, mu: MomentSequence, order: int) -> MomentSequence:
    """
    Inverts forward_moments order by order:
    sharp[k] = conv[k] - sum_{n < k} C(k, n) mu[k - n] sharp[n].

    Args:
        convolved (MomentSequence): Moments of the smeared statistics.
        mu (MomentSequence): Moments of the smearing measure.
        order (int): Highest order K.

    Returns:
        Sharp moments up to order K.
    """
    convolved.require_order(order)
    mu.require_order(order)
    sharp: list[float] = [1.0]
    for k in range(1, order + 1):
        correction: float = math.fsum(math.comb(k, n) * mu[k - n] * sharp[n] for n in range(k))
        sharp.append(convolved[k] - correction)
    return MomentSequence(sharp)


class GrowthCheck:
    def __init__(self, passed: bool, first_violation: Optional[int]) -> None:
        self.passed: bool = passed
        self.first_violation: Optional[int] = first_violation

    def __bool__(self) -> bool:
        return self.passed

    def __repr__(self) -> str:
        return f"GrowthCheck(passed={self.passed}, first_violation={self.first_violation})"


def growth_check(moments: MomentSequence, constant: float, rate: float) -> GrowthCheck:
    """
    Exponential boundedness |m[k]| <= C R^k k! for every available order.
    """
    for k, value in enumerate(moments):
        if abs(value) > constant * rate**k * math.factorial(k):
            return GrowthCheck(False, k)
    return GrowthCheck(True, None)


def position_distribution(wave: WaveFunction) -> GridDistribution:
    return GridDistribution.normalized(wave.x0, wave.dx, np.abs(wave.amplitudes) ** 2 * wave.dx)


def momentum_amplitudes(wave: WaveFunction) -> tuple[float, float, np.ndarray]:
    """
    psi^(p) = (2 pi)^{-1/2} sum_n psi(x_n) exp(-i p x_n) dx on the reciprocal grid p_j = p0 + j dp,
    dp = 2 pi / (N dx), p0 = -(N - 1) dp / 2.

    Returns:
        p0, dp and the transformed amplitudes.
    """
    n: int = len(wave)
    dp: float = 2.0 * np.pi / (n * wave.dx)
    p0: float = -(n - 1) * dp / 2.0
    indices: np.ndarray = np.arange(n)
    transformed: np.ndarray = np.fft.fft(wave.amplitudes * np.exp(-1j * p0 * indices * wave.dx))
    phase: np.ndarray = np.exp(-1j * (p0 + indices * dp) * wave.x0)
    return p0, dp, wave.dx / math.sqrt(2.0 * np.pi) * phase * transformed


def momentum_distribution(wave: WaveFunction) -> GridDistribution:
    p0, dp, amplitudes = momentum_amplitudes(wave)
    return GridDistribution.normalized(p0, dp, np.abs(amplitudes) ** 2 * dp)


def _checked_state(grid: Grid, amplitudes: np.ndarray, name: str) -> WaveFunction:
    norm: float = math.fsum(np.abs(amplitudes) ** 2) * grid.dx
    if abs(1.0 - norm) > HERMITE_NORM_DEFICIT:
        raise GridTooSmallException(f"{name} has squared norm {norm!r} on {grid}.")
    logger.debug(f"{name}: renormalizing deficit {1.0 - norm:.3e}.")
    return WaveFunction.normalized(grid.x0, grid.dx, amplitudes)


def hermite_state(n: int, grid: Optional[Grid] = None) -> WaveFunction:
    """
    n-th normalized Hermite function by the three-term recurrence
    h_{k+1} = sqrt(2 / (k + 1)) x h_k - sqrt(k / (k + 1)) h_{k-1}.

    Args:
        n (int): Order, 0 <= n <= 20.
        grid (Optional[Grid]): Sampling grid, must reach sqrt(2 n + 1) + 8.

    Returns:
        Normalized wave function.
    """
    grid = grid if grid is not None else Grid()
    if n < 0 or n > MAX_HERMITE_ORDER:
        raise RunConfigException(f"Hermite order {n} outside 0..{MAX_HERMITE_ORDER}.")
    if grid.reach < math.sqrt(2 * n + 1) + 8.0:
        raise GridTooSmallException(f"Hermite order {n} needs reach {math.sqrt(2 * n + 1) + 8.0:.3f}, {grid}.")
    x: np.ndarray = grid.points
    previous: np.ndarray = np.zeros_like(x)
    current: np.ndarray = np.pi**-0.25 * np.exp(-0.5 * x * x)
    for k in range(n):
        previous, current = current, math.sqrt(2.0 / (k + 1)) * x * current - math.sqrt(k / (k + 1)) * previous
    return _checked_state(grid, current.astype(np.complex128), f"Hermite state {n}")


def gaussian_state(
    width: float = 1.0, grid: Optional[Grid] = None, center: float = 0.0, momentum: float = 0.0
) -> WaveFunction:
    """
    (pi s^2)^{-1/4} exp(-(x - c)^2 / (2 s^2)) exp(i k x); position variance s^2 / 2, momentum variance 1 / (2 s^2).
    """
    grid = grid if grid is not None else Grid()
    if not (math.isfinite(width) and width > 0):
        raise InvalidDistributionException(f"Gaussian width must be positive and finite, got {width!r}.")
    x: np.ndarray = grid.points
    amplitudes: np.ndarray = (np.pi * width * width) ** -0.25 * np.exp(
        -0.5 * ((x - center) / width) ** 2 + 1j * momentum * x
    )
    return _checked_state(grid, amplitudes, f"Gaussian state (s = {width!r})")


def translate(wave: WaveFunction, shift: float) -> WaveFunction:
    """
    psi(x - a) for a grid-aligned shift a; amplitude pushed off the grid must be negligible.
    """
    steps: int = int(round(shift / wave.dx))
    if abs(steps * wave.dx - shift) > 1e-9 * max(1.0, abs(shift)):
        raise InvalidDistributionException(f"Shift {shift!r} is not a multiple of dx = {wave.dx!r}.")
    shifted: np.ndarray = np.zeros_like(wave.amplitudes)
    if steps >= 0:
        shifted[steps:] = wave.amplitudes[: len(wave) - steps]
    else:
        shifted[:steps] = wave.amplitudes[-steps:]
    norm: float = math.fsum(np.abs(shifted) ** 2) * wave.dx
    if abs(1.0 - norm) > HERMITE_NORM_DEFICIT:
        raise GridTooSmallException(f"Shift {shift!r} moves norm {1.0 - norm:.3e} off the grid.")
    return WaveFunction.normalized(wave.x0, wave.dx, shifted)


def max_relative_error(estimate: MomentSequence, reference: MomentSequence, order: int) -> float:
    """
    max_k |estimate[k] - reference[k]| / max(1, |reference[k]|) over k <= order.
    """
    estimate.require_order(order)
    reference.require_order(order)
    return max(abs(estimate[k] - reference[k]) / max(1.0, abs(reference[k])) for k in range(order + 1))
