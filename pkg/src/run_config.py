import logging
import os
from typing import Optional, Sequence

from constants import (
    DEFAULT_GRID_L,
    DEFAULT_GRID_N,
    DEFAULT_QUAD_ORDER,
    DEFAULT_SEED,
    SEED_ENV_VAR,
    TOLERANCE_DEFAULTS,
)
from exceptions import RunConfigException
from feasibility import FeasibilityConfig
from moments import Grid
from qubit_models import SphereQuadrature

logger: logging.Logger = logging.getLogger(__name__)


def default_seed() -> int:
    """
    Seed from the COEXKIT_SEED environment variable, DEFAULT_SEED when unset.
    """
    value: Optional[str] = os.environ.get(SEED_ENV_VAR)
    if value is None or value.strip() == "":
        return DEFAULT_SEED
    try:
        return int(value)
    except ValueError:
        raise RunConfigException(f"{SEED_ENV_VAR}={value!r} is not an integer.")


def parse_tolerances(items: Optional[Sequence[str]]) -> dict[str, float]:
    """
    Merge name=value overrides into the default tolerance map.

    Args:
        items (Optional[Sequence[str]]): Overrides such as "margin=1e-8".

    Returns:
        Complete tolerance map.
    """
    tolerances: dict[str, float] = dict(TOLERANCE_DEFAULTS)
    for item in items or []:
        name, separator, value = item.partition("=")
        name = name.strip()
        if separator == "" or name not in tolerances:
            raise RunConfigException(f"Unknown tolerance {item!r}, expected one of {sorted(tolerances)}.")
        try:
            tolerances[name] = float(value)
        except ValueError:
            raise RunConfigException(f"Tolerance {name} has non-numeric value {value!r}.")
    return tolerances


class RunConfig:
    """
    Seed, tolerances, position grid and sphere quadrature shared by all subcommands.
    """

    def __init__(
        self,
        seed: Optional[int] = None,
        tolerances: Optional[dict[str, float]] = None,
        grid_n: int = DEFAULT_GRID_N,
        grid_l: float = DEFAULT_GRID_L,
        quad_order: int = DEFAULT_QUAD_ORDER,
    ) -> None:
        self.seed: int = seed if seed is not None else default_seed()
        self.tolerances: dict[str, float] = dict(TOLERANCE_DEFAULTS)
        self.tolerances.update(tolerances or {})
        self.grid_n: int = grid_n
        self.grid_l: float = grid_l
        self.quad_order: int = quad_order
        self.validate()

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            seed=getattr(args, "seed", None),
            tolerances=parse_tolerances(getattr(args, "tol", None)),
            grid_n=getattr(args, "grid_n", DEFAULT_GRID_N),
            grid_l=getattr(args, "grid_l", DEFAULT_GRID_L),
            quad_order=getattr(args, "quad_order", DEFAULT_QUAD_ORDER),
        )

    def validate(self) -> None:
        for name, value in self.tolerances.items():
            if name not in TOLERANCE_DEFAULTS:
                raise RunConfigException(f"Unknown tolerance {name!r}.")
            if not value > 0:
                raise RunConfigException(f"Tolerance {name} must be positive, got {value!r}.")
        if self.grid_n < 2 or self.grid_n & (self.grid_n - 1) != 0:
            raise RunConfigException(f"Grid size must be a power of two, got {self.grid_n}.")
        if not self.grid_l > 0:
            raise RunConfigException(f"Grid half-width must be positive, got {self.grid_l!r}.")
        if self.quad_order < 2 or self.quad_order % 2 != 0:
            raise RunConfigException(f"Quadrature order must be even and at least 2, got {self.quad_order}.")

    def tol(self, name: str) -> float:
        return self.tolerances[name]

    def grid(self) -> Grid:
        return Grid(self.grid_n, self.grid_l)

    def quadrature(self) -> SphereQuadrature:
        return SphereQuadrature(self.quad_order)

    def feasibility(self, progress: bool = False) -> FeasibilityConfig:
        return FeasibilityConfig(
            seed=self.seed,
            feas_tol=self.tol("feasibility"),
            uncertain_tol=self.tol("uncertain"),
            effect_tol=self.tol("effect"),
            progress=progress,
        )

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "tolerances": dict(self.tolerances),
            "grid_n": self.grid_n,
            "grid_l": self.grid_l,
            "quad_order": self.quad_order,
        }
