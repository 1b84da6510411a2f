CONFIG_FILE: str = "config.json"
SEED_ENV_VAR: str = "COEXKIT_SEED"

# Tolerances
HERMITIAN_TOL: float = 1e-12
PSD_TOL: float = 1e-10
EFFECT_TOL: float = 1e-10
STATE_TRACE_TOL: float = 1e-12
COMPLETENESS_TOL: float = 1e-10
STOCHASTIC_TOL: float = 1e-12
EQUALITY_TOL: float = 1e-9
SQRT_CLAMP_TOL: float = 1e-8
JACOBI_OFF_TOL: float = 1e-13
JACOBI_MAX_SWEEPS: int = 100
SINGULAR_DET_TOL: float = 1e-12
COMMUTE_TOL: float = 1e-10
LUDERS_MIN_PROBABILITY: float = 1e-14
MARGIN_TOL: float = 1e-12
CLI_MARGIN_TOL: float = 1e-6
FEASIBILITY_TOL: float = 1e-7
UNCERTAIN_TOL: float = 1e-3
NORMALIZATION_TOL: float = 1e-10
HERMITE_NORM_DEFICIT: float = 1e-8
UNCERTAINTY_BOUND: float = 0.25
UNCERTAINTY_SLACK: float = 1e-9
DIRECTION_TOL: float = 1e-12
QUADRATURE_WEIGHT_TOL: float = 1e-8

# Limits
MAX_ORACLE_DIM: int = 8
MAX_RANGE_OUTCOMES: int = 16
MAX_HERMITE_ORDER: int = 20

# Defaults
DEFAULT_SEED: int = 0
DEFAULT_GRID_N: int = 4096
DEFAULT_GRID_L: float = 20.0
DEFAULT_QUAD_ORDER: int = 64
DEFAULT_STARTS: int = 16
DEFAULT_MAX_ITER: int = 2000
DEFAULT_SELFTEST_PAIRS: int = 60

# Tolerance names accepted by --tol
TOLERANCE_DEFAULTS: dict[str, float] = {
    "hermitian": HERMITIAN_TOL,
    "effect": EFFECT_TOL,
    "margin": CLI_MARGIN_TOL,
    "feasibility": FEASIBILITY_TOL,
    "uncertain": UNCERTAIN_TOL,
}

# Feasibility verdicts
STATUS_FEASIBLE: str = "feasible"
STATUS_INFEASIBLE: str = "infeasible"
STATUS_UNCERTAIN: str = "boundary-uncertain"

# Verdict exit codes
EXIT_POSITIVE: int = 0
EXIT_NEGATIVE: int = 1
EXIT_UNCERTAIN: int = 2
