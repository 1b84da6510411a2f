import argparse
import logging
import sys
import traceback
from pathlib import Path
from typing import Any, Optional

from coexistence import CoexistenceReport, binary_povm, coexist_qubit, coexist_qubit_effects, coexist_unbiased
from constants import (
    CONFIG_FILE,
    DEFAULT_GRID_L,
    DEFAULT_GRID_N,
    DEFAULT_QUAD_ORDER,
    DEFAULT_SELFTEST_PAIRS,
    EXIT_NEGATIVE,
    EXIT_POSITIVE,
    EXIT_UNCERTAIN,
    STATUS_FEASIBLE,
    STATUS_UNCERTAIN,
    TOLERANCE_DEFAULTS,
)
from exceptions import (
    EC_ARG_GENERAL,
    EC_UNEXPECTED,
    MESSAGE_ARG_GENERAL,
    ArgumentException,
    ExpectedException,
    InvalidPovmException,
)
from feasibility import FeasibilityResult, feasibility_to_dict, joint_feasibility
from json_codec import decode_matrix, decode_povm, dumps, encode_joint, encode_povm, load_json
from linalg_core import QubitBloch, frobenius_distance, matrix_to_bloch
from moments import (
    GridDistribution,
    MomentSequence,
    WaveFunction,
    convolve,
    gaussian_distribution,
    gaussian_state,
    growth_check,
    hermite_state,
    max_relative_error,
    moment_sequence,
    position_distribution,
    reconstruct_moments,
)
from phasespace import (
    GeneratingOperator,
    gaussian_generator,
    hermite_generator,
    indirect_measurement,
    marginal_densities,
    uncertainty_check,
)
from povm import DiscretePOVM, validate
from qubit_models import Direction, build_spin_joint, hemisphere_marginal, reconstruct_sharp, sharp_spin, spin_marginals
from run_config import RunConfig
from selftest import run_selftest

RECONSTRUCTION_TOL = 1e-12

logger: logging.Logger = logging.getLogger(__name__)


def parse_vector(value: str) -> list[float]:
    """
    Parse "x,y,z" into three floats.
    """
    try:
        components: list[float] = [float(item) for item in value.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not a comma separated vector.")
    if len(components) != 3:
        raise argparse.ArgumentTypeError(f"{value!r} needs exactly three components.")
    return components


def set_arguments(parser: argparse.ArgumentParser, names: list, output_help: str = "") -> None:
    """
    Set arguments for the parser based on the provided names.

    Args:
        parser (argparse.ArgumentParser): The argument parser to set arguments for.
        names (list): List of argument names to set.
        output_help (str): Help for output argument. Defaults to "".
    """
    for name in names:
        match name:
            case "a0":
                parser.add_argument("--a0", type=float, default=0.5, help="Scalar part of effect A.")
            case "a":
                parser.add_argument("--a", type=parse_vector, help="Bloch vector of effect A as x,y,z.")
            case "b0":
                parser.add_argument("--b0", type=float, default=0.5, help="Scalar part of effect B.")
            case "b":
                parser.add_argument("--b", type=parse_vector, help="Bloch vector of effect B as x,y,z.")
            case "unbiased":
                parser.add_argument(
                    "--unbiased", action="store_true", help="Use the unbiased test (a0 = b0 = 1/2)."
                )
            case "oracle":
                parser.add_argument(
                    "--oracle", action="store_true", help="Cross-check with the joint observable search."
                )
            case "json":
                parser.add_argument("--json", type=str, help="JSON file with the input observables.")
            case "seed":
                parser.add_argument("--seed", type=int, default=None, help="Random seed (default: COEXKIT_SEED or 0).")
            case "tol":
                parser.add_argument(
                    "--tol",
                    type=str,
                    action="append",
                    metavar="NAME=VALUE",
                    help=f"Override a tolerance, one of: {', '.join(TOLERANCE_DEFAULTS)}.",
                )
            case "grid":
                parser.add_argument("--grid-n", type=int, default=DEFAULT_GRID_N, help="Grid points (power of two).")
                parser.add_argument("--grid-l", type=float, default=DEFAULT_GRID_L, help="Grid half-width.")
            case "quad_order":
                parser.add_argument(
                    "--quad-order", type=int, default=DEFAULT_QUAD_ORDER, help="Sphere quadrature order (even)."
                )
            case "state":
                group = parser.add_mutually_exclusive_group()
                group.add_argument("--hermite", type=int, help="Hermite state of this order.")
                group.add_argument("--gaussian", type=float, help="Gaussian state of this width.")
            case "sigma":
                parser.add_argument("--sigma", type=float, default=0.5, help="Width of the Gaussian smearing.")
            case "order":
                parser.add_argument("--order", "-k", type=int, default=8, help="Highest moment order.")
            case "growth":
                parser.add_argument("--growth-c", type=float, default=2.0, help="Constant C of the growth bound.")
                parser.add_argument("--growth-r", type=float, default=2.0, help="Rate R of the growth bound.")
            case "indirect":
                parser.add_argument(
                    "--indirect", type=int, help="Reconstruct both moment sequences of this Hermite state."
                )
            case "pairs":
                parser.add_argument(
                    "--pairs", type=int, default=DEFAULT_SELFTEST_PAIRS, help="Random samples per sampled check."
                )
            case "verbose":
                parser.add_argument("--verbose", "-v", action="store_true", help="Log progress on stderr.")
            case "output":
                parser.add_argument("--output", "-o", type=str, required=False, help=output_help)


def configure_logging(verbose: bool) -> None:
    root: logging.Logger = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    console_handler: logging.StreamHandler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter("%(message)s"))
    root.addHandler(console_handler)
    root.setLevel(logging.INFO if verbose else logging.WARNING)


def emit(report: dict[str, Any]) -> None:
    print(dumps(report))


def run_config_subcommand(args) -> int:
    get_coexkit_config(args.output)
    return EXIT_POSITIVE


def get_coexkit_config(path: Optional[str]) -> None:
    """
    If Path is not provided, output content of config.
    If Path is provided, copy config to destination path.

    Args:
        path (string): Destination path for config.json file
    """
    config_path: Path = Path(__file__).parent.parent.joinpath(CONFIG_FILE).resolve()

    with open(config_path, "r", encoding="utf-8") as file:
        if path is None:
            print(file.read())
        else:
            with open(path, "w") as out:
                out.write(file.read())


def _bloch_pair(args) -> tuple[QubitBloch, QubitBloch]:
    if args.a is None or args.b is None:
        raise ArgumentException("Both --a and --b are required without --json.")
    if args.unbiased:
        return QubitBloch(0.5, args.a), QubitBloch(0.5, args.b)
    return QubitBloch(args.a0, args.a), QubitBloch(args.b0, args.b)


def _feasibility_verdict(result: FeasibilityResult) -> int:
    if result.status == STATUS_FEASIBLE:
        return EXIT_POSITIVE
    if result.status == STATUS_UNCERTAIN:
        return EXIT_UNCERTAIN
    return EXIT_NEGATIVE


def _feasibility_report(result: FeasibilityResult) -> dict[str, Any]:
    report: dict[str, Any] = feasibility_to_dict(result)
    if result.witness is not None:
        report["witness"] = encode_joint(result.witness)
    return report


def run_coex_subcommand(args) -> int:
    config: RunConfig = RunConfig.from_args(args)
    margin_tol: float = config.tol("margin")
    effect_tol: float = config.tol("effect")

    if args.json is not None:
        data: Any = load_json(args.json)
        if not isinstance(data, dict) or "A" not in data or "B" not in data:
            raise ArgumentException("Coexistence JSON needs matrices under \"A\" and \"B\".")
        first_matrix = decode_matrix(data["A"], config.tol("hermitian"))
        second_matrix = decode_matrix(data["B"], config.tol("hermitian"))
        report: CoexistenceReport = coexist_qubit_effects(first_matrix, second_matrix, margin_tol, effect_tol)
        first, second = matrix_to_bloch(first_matrix), matrix_to_bloch(second_matrix)
    else:
        first, second = _bloch_pair(args)
        if args.unbiased:
            report = coexist_unbiased(first.a, second.a, margin_tol, effect_tol)
        else:
            report = coexist_qubit(first, second, margin_tol, effect_tol)

    output: dict[str, Any] = {"coexistence": report.to_dict()}
    verdict: int = EXIT_POSITIVE if report.coexistent else EXIT_NEGATIVE
    if args.oracle:
        result: FeasibilityResult = joint_feasibility(
            binary_povm(first, effect_tol), binary_povm(second, effect_tol), config.feasibility(args.verbose)
        )
        output["oracle"] = _feasibility_report(result)
        if result.status == STATUS_UNCERTAIN:
            verdict = EXIT_UNCERTAIN
    emit(output)
    return verdict


def run_oracle_subcommand(args) -> int:
    config: RunConfig = RunConfig.from_args(args)
    if args.json is not None:
        data: Any = load_json(args.json)
        if not isinstance(data, dict) or "E1" not in data or "E2" not in data:
            raise ArgumentException("Oracle JSON needs observables under \"E1\" and \"E2\".")
        observables: list[DiscretePOVM] = [
            decode_povm(data[key], config.tol("hermitian")) for key in ("E1", "E2")
        ]
    else:
        observables = [binary_povm(bloch, config.tol("effect")) for bloch in _bloch_pair(args)]

    for observable in observables:
        check = validate(observable, config.tol("effect"))
        if not check:
            raise InvalidPovmException(str(check.violation))

    result: FeasibilityResult = joint_feasibility(observables[0], observables[1], config.feasibility(args.verbose))
    emit({"oracle": _feasibility_report(result)})
    return _feasibility_verdict(result)


def run_moments_subcommand(args) -> int:
    config: RunConfig = RunConfig.from_args(args)
    grid = config.grid()
    order: int = args.order
    if args.gaussian is not None:
        state: WaveFunction = gaussian_state(args.gaussian, grid)
        state_name: dict[str, Any] = {"gaussian": args.gaussian}
    else:
        n: int = args.hermite if args.hermite is not None else 0
        state = hermite_state(n, grid)
        state_name = {"hermite": n}

    sharp: GridDistribution = position_distribution(state)
    mu: GridDistribution = gaussian_distribution(args.sigma, grid.dx)
    sharp_moments: MomentSequence = moment_sequence(sharp, order)
    convolved: MomentSequence = moment_sequence(convolve(mu, sharp), order)
    reconstructed: MomentSequence = reconstruct_moments(convolved, moment_sequence(mu, order), order)
    growth = growth_check(sharp_moments, args.growth_c, args.growth_r)

    emit(
        {
            "state": state_name,
            "sigma": args.sigma,
            "order": order,
            "sharp_moments": list(sharp_moments),
            "convolved_moments": list(convolved),
            "reconstructed_moments": list(reconstructed),
            "max_relative_error": max_relative_error(reconstructed, sharp_moments, order),
            "growth_check": {
                "C": args.growth_c,
                "R": args.growth_r,
                "passed": growth.passed,
                "first_violation": growth.first_violation,
            },
        }
    )
    return EXIT_POSITIVE


def run_spin_subcommand(args) -> int:
    config: RunConfig = RunConfig.from_args(args)
    joint = build_spin_joint()
    first, second = spin_marginals(joint)

    reconstructions: list[dict[str, Any]] = []
    exact: bool = True
    for smeared, axis in ((first, [1.0, 0.0, 0.0]), (second, [0.0, 1.0, 0.0])):
        recovered = reconstruct_sharp(smeared)
        error: float = max(
            frobenius_distance(got, want) for got, want in zip(recovered.operators, sharp_spin(axis).operators)
        )
        exact = exact and error < RECONSTRUCTION_TOL
        reconstructions.append({"coefficients": recovered.coefficients.tolist(), "projection_error": error})

    boundary: CoexistenceReport = coexist_unbiased(
        matrix_to_bloch(first.operators[0]).a, matrix_to_bloch(second.operators[0]).a
    )
    hemisphere: DiscretePOVM = hemisphere_marginal(Direction([0.0, 0.0, 1.0]), config.quadrature())
    emit(
        {
            "joint": encode_joint(joint),
            "marginals": [encode_povm(first), encode_povm(second)],
            "reconstructions": reconstructions,
            "reconstruction_exact": exact,
            "boundary": boundary.to_dict(),
            "hemisphere": {
                "quad_order": config.quad_order,
                "bloch": [
                    {"a0": bloch.a0, "a": bloch.a.tolist()}
                    for bloch in (matrix_to_bloch(operator) for operator in hemisphere.operators)
                ],
            },
        }
    )
    return EXIT_POSITIVE if exact else EXIT_NEGATIVE


def run_phase_subcommand(args) -> int:
    config: RunConfig = RunConfig.from_args(args)
    grid = config.grid()
    if args.hermite is not None:
        generator: GeneratingOperator = hermite_generator(args.hermite, grid)
        generator_name: dict[str, Any] = {"hermite": args.hermite}
    else:
        width: float = args.gaussian if args.gaussian is not None else 1.0
        generator = gaussian_generator(width, grid)
        generator_name = {"gaussian": width}

    check = uncertainty_check(marginal_densities(generator))
    output: dict[str, Any] = {"generator": generator_name, "uncertainty": check.to_dict()}
    if args.indirect is not None:
        indirect = indirect_measurement(hermite_state(args.indirect, grid), generator, args.order)
        output["indirect"] = indirect.to_dict()
        output["indirect"]["hermite"] = args.indirect
    emit(output)
    return EXIT_POSITIVE if check.satisfied else EXIT_NEGATIVE


def run_selftest_subcommand(args) -> int:
    config: RunConfig = RunConfig.from_args(args)
    results: dict[str, dict[str, Any]] = run_selftest(config, args.pairs)
    emit({"seed": config.seed, "pairs": args.pairs, "checks": results})
    return EXIT_POSITIVE if all(result["passed"] for result in results.values()) else EXIT_NEGATIVE


def main() -> None:
    parser = argparse.ArgumentParser(
        description="Coexistence and joint measurability of quantum observables",
    )

    subparsers = parser.add_subparsers(title="Commands", dest="command", required=True)
    common: list[str] = ["seed", "tol", "grid", "quad_order", "verbose"]

    # Config subparser
    config_subparser = subparsers.add_parser(
        "config",
        help="Extract config file for integration",
    )
    set_arguments(
        config_subparser,
        ["output"],
        "Output to save the config JSON file. Application output is used if not provided.",
    )
    config_subparser.set_defaults(func=run_config_subcommand)

    # Closed-form qubit coexistence subparser
    coex_subparser = subparsers.add_parser("coex", help="Decide coexistence of two qubit effects")
    set_arguments(coex_subparser, ["a0", "a", "b0", "b", "unbiased", "oracle", "json"] + common)
    coex_subparser.set_defaults(func=run_coex_subcommand)

    # Joint observable search subparser
    oracle_subparser = subparsers.add_parser("oracle", help="Search for a joint observable of two binary observables")
    set_arguments(oracle_subparser, ["a0", "a", "b0", "b", "unbiased", "json"] + common)
    oracle_subparser.set_defaults(func=run_oracle_subcommand)

    # Moment reconstruction subparser
    moments_subparser = subparsers.add_parser("moments", help="Reconstruct sharp position moments from smeared ones")
    set_arguments(moments_subparser, ["state", "sigma", "order", "growth"] + common)
    moments_subparser.set_defaults(func=run_moments_subcommand)

    # Spin-1/2 models subparser
    spin_subparser = subparsers.add_parser("spin", help="Spin joint observable, reconstruction and sphere marginals")
    set_arguments(spin_subparser, common)
    spin_subparser.set_defaults(func=run_spin_subcommand)

    # Phase space subparser
    phase_subparser = subparsers.add_parser("phase", help="Marginal variances of a phase space observable")
    set_arguments(phase_subparser, ["state", "indirect", "order"] + common)
    phase_subparser.set_defaults(func=run_phase_subcommand)

    # Acceptance checks subparser
    selftest_subparser = subparsers.add_parser("selftest", help="Run the acceptance checks at reduced sizes")
    set_arguments(selftest_subparser, ["pairs"] + common)
    selftest_subparser.set_defaults(func=run_selftest_subcommand)

    # Parse arguments
    try:
        args = parser.parse_args()
    except ExpectedException as e:
        print(e.message, file=sys.stderr)
        sys.exit(e.error_code)
    except SystemExit as e:
        if e.code != 0:
            print(MESSAGE_ARG_GENERAL, file=sys.stderr)
            sys.exit(EC_ARG_GENERAL)
        # This happens when --help is used, exit gracefully
        sys.exit(0)
    except Exception as e:
        print(traceback.format_exc(), file=sys.stderr)
        print(f"Failed to run the program:{e}", file=sys.stderr)
        sys.exit(EC_UNEXPECTED)

    if hasattr(args, "func"):
        configure_logging(getattr(args, "verbose", False))

        # Run subcommand
        try:
            code: int = args.func(args)
        except ExpectedException as e:
            print(e.message, file=sys.stderr)
            sys.exit(e.error_code)
        except Exception as e:
            print(traceback.format_exc(), file=sys.stderr)
            print(f"Failed to run the program: {e}", file=sys.stderr)
            sys.exit(EC_UNEXPECTED)
        sys.exit(code)
    else:
        parser.print_help()


if __name__ == "__main__":
    main()
