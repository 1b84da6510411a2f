import pytest

from run_config import RunConfig
from selftest import (
    CHECKS,
    check_coexistence_boundary,
    check_growth,
    check_moment_recursion,
    check_oracle_agreement,
    check_product_joint,
    check_rigidity,
    check_sphere,
    check_spin_reconstruction,
    check_uncertainty,
)


@pytest.fixture
def config() -> RunConfig:
    return RunConfig(seed=0, grid_n=1024, grid_l=16.0, quad_order=16)


def test_registered_checks() -> None:
    assert list(CHECKS) == [
        "coexistence_boundary",
        "oracle_agreement",
        "spin_reconstruction",
        "moment_recursion",
        "growth_condition",
        "sphere_observable",
        "uncertainty_product",
        "projection_rigidity",
        "product_joint",
    ]


@pytest.mark.parametrize(
    "check",
    [
        check_coexistence_boundary,
        check_spin_reconstruction,
        check_moment_recursion,
        check_growth,
        check_sphere,
        check_uncertainty,
        check_product_joint,
    ],
)
def test_deterministic_checks_pass(config: RunConfig, check) -> None:
    result: dict = check(config, 3)
    assert result["passed"], result


def test_rigidity_on_one_commuting_pair(config: RunConfig) -> None:
    result: dict = check_rigidity(config, 1)
    assert result["passed"]
    assert result["feasible"] == 1
    assert result["uncertain_noncommuting"] == 0


def test_rigidity_sweep_reports_every_count(config: RunConfig) -> None:
    result: dict = check_rigidity(config, 20)
    assert result["passed"], result
    assert result["violations"] == 0
    assert result["feasible"] >= 10
    assert 0 <= result["uncertain_noncommuting"] <= 10


def test_oracle_agrees_with_closed_form(config: RunConfig) -> None:
    result: dict = check_oracle_agreement(config, 150)
    assert result["passed"], result
    assert result["mismatches"] == 0
    assert result["compared"] >= 100
