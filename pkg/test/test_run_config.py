import pytest

from constants import CLI_MARGIN_TOL, DEFAULT_SEED, SEED_ENV_VAR
from exceptions import RunConfigException
from feasibility import FeasibilityConfig
from run_config import RunConfig, default_seed, parse_tolerances


def test_default_seed(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)
    assert default_seed() == DEFAULT_SEED
    monkeypatch.setenv(SEED_ENV_VAR, "7")
    assert default_seed() == 7
    assert RunConfig().seed == 7
    assert RunConfig(seed=3).seed == 3
    monkeypatch.setenv(SEED_ENV_VAR, "seven")
    with pytest.raises(RunConfigException):
        default_seed()


def test_parse_tolerances() -> None:
    tolerances: dict[str, float] = parse_tolerances(["margin=1e-8", " feasibility = 1e-6"])
    assert tolerances["margin"] == 1e-8
    assert tolerances["feasibility"] == 1e-6
    assert parse_tolerances(None)["margin"] == CLI_MARGIN_TOL
    for item in ("bogus=1", "equality=1e-9", "margin", "margin=abc"):
        with pytest.raises(RunConfigException):
            parse_tolerances([item])


@pytest.mark.parametrize(
    "kwargs",
    [
        {"grid_n": 100},
        {"grid_n": 1},
        {"grid_l": 0.0},
        {"quad_order": 3},
        {"quad_order": 0},
        {"tolerances": {"margin": -1.0}},
        {"tolerances": {"unknown": 1.0}},
    ],
)
def test_invalid_configuration(kwargs: dict) -> None:
    with pytest.raises(RunConfigException):
        RunConfig(seed=0, **kwargs)


def test_derived_settings() -> None:
    config: RunConfig = RunConfig(
        seed=5, tolerances={"feasibility": 1e-8, "effect": 1e-6}, grid_n=512, grid_l=10.0, quad_order=8
    )
    feasibility: FeasibilityConfig = config.feasibility()
    assert feasibility.seed == 5
    assert feasibility.feas_tol == 1e-8
    assert feasibility.effect_tol == 1e-6
    assert config.grid().n == 512
    assert config.quadrature().order == 8
    assert config.to_dict()["tolerances"]["feasibility"] == 1e-8
