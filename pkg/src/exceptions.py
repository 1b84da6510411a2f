EC_UNEXPECTED = 9

EC_ARG_GENERAL = 10
EC_ARG_MALFORMED_JSON = 11
EC_ARG_RUN_CONFIG = 12

EC_NOT_HERMITIAN = 20
EC_NOT_PSD = 21
EC_NOT_EFFECT = 22
EC_NOT_DENSITY_STATE = 23
EC_DIMENSION_MISMATCH = 24
EC_SHAPE_MISMATCH = 25
EC_SINGULAR_SMEARING = 26
EC_PARTIAL_OUTCOME_MAP = 27
EC_TOO_MANY_OUTCOMES = 28
EC_NON_COMMUTING = 29
EC_INVALID_POVM = 30
EC_INVALID_STOCHASTIC_MATRIX = 31
EC_INVALID_BLOCH = 32
EC_NON_BINARY_POVM = 33
EC_GRID_TOO_SMALL = 34
EC_GRID_SPACING_MISMATCH = 35
EC_INVALID_GENERATOR = 36
EC_INVALID_QUADRATURE = 37
EC_INVALID_DIRECTION = 38
EC_INSUFFICIENT_MOMENTS = 39
EC_INVALID_DISTRIBUTION = 40

MESSAGE_UNEXPECTED = "Failed to run the program."

MESSAGE_ARG_GENERAL = "Failed to parse arguments. Please check the usage and try again."
MESSAGE_ARG_MALFORMED_JSON = "Input JSON is malformed."
MESSAGE_ARG_RUN_CONFIG = "Invalid run configuration."

MESSAGE_NOT_HERMITIAN = "Matrix is not Hermitian."
MESSAGE_NOT_PSD = "Matrix is not positive semidefinite."
MESSAGE_NOT_EFFECT = "Operator is not an effect (O <= A <= I)."
MESSAGE_NOT_DENSITY_STATE = "Operator is not a density state."
MESSAGE_DIMENSION_MISMATCH = "Operator dimensions do not match."
MESSAGE_SHAPE_MISMATCH = "Stochastic matrix shape does not match the observable."
MESSAGE_SINGULAR_SMEARING = "Smearing matrix is singular."
MESSAGE_PARTIAL_OUTCOME_MAP = "Outcome map is not defined on every outcome."
MESSAGE_TOO_MANY_OUTCOMES = "Too many outcomes for range enumeration."
MESSAGE_NON_COMMUTING = "Observables do not commute."
MESSAGE_INVALID_POVM = "Effects do not form an observable."
MESSAGE_INVALID_STOCHASTIC_MATRIX = "Matrix is not column stochastic."
MESSAGE_INVALID_BLOCH = "Bloch parameters do not describe a qubit effect."
MESSAGE_NON_BINARY_POVM = "Joint feasibility search needs two binary observables."
MESSAGE_GRID_TOO_SMALL = "Grid is too small for the requested wave function."
MESSAGE_GRID_SPACING_MISMATCH = "Grid spacings do not match."
MESSAGE_INVALID_GENERATOR = "Invalid generating operator."
MESSAGE_INVALID_QUADRATURE = "Invalid sphere quadrature."
MESSAGE_INVALID_DIRECTION = "Direction is not a unit vector."
MESSAGE_INSUFFICIENT_MOMENTS = "Moment sequence is shorter than the requested order."
MESSAGE_INVALID_DISTRIBUTION = "Invalid grid distribution."


class ExpectedException(BaseException):
    def __init__(self, error_code: int) -> None:
        self.error_code: int = error_code
        self.message: str = ""

    def _add_note(self, note: str) -> None:
        self.message = note

    def __str__(self) -> str:
        return self.message


class CoexkitException(ExpectedException):
    """
    Base for every failure with a fixed code and message. Optional detail is appended to the message.
    """

    def __init__(self, error_code: int, message: str, detail: str = "") -> None:
        super().__init__(error_code)
        self._add_note(f"{message} {detail}" if len(detail) > 0 else message)


class ArgumentException(ExpectedException):
    def __init__(self, message: str = MESSAGE_ARG_GENERAL, error_code: int = EC_ARG_GENERAL) -> None:
        super().__init__(error_code)
        self._add_note(message)


class MalformedJsonException(ArgumentException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(f"{MESSAGE_ARG_MALFORMED_JSON} {detail}".strip(), EC_ARG_MALFORMED_JSON)


class RunConfigException(ArgumentException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(f"{MESSAGE_ARG_RUN_CONFIG} {detail}".strip(), EC_ARG_RUN_CONFIG)


class NotHermitianException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_NOT_HERMITIAN, MESSAGE_NOT_HERMITIAN, detail)


class NotPsdException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_NOT_PSD, MESSAGE_NOT_PSD, detail)


class NotEffectException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_NOT_EFFECT, MESSAGE_NOT_EFFECT, detail)


class NotDensityStateException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_NOT_DENSITY_STATE, MESSAGE_NOT_DENSITY_STATE, detail)


class DimensionMismatchException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_DIMENSION_MISMATCH, MESSAGE_DIMENSION_MISMATCH, detail)


class ShapeMismatchException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_SHAPE_MISMATCH, MESSAGE_SHAPE_MISMATCH, detail)


class SingularSmearingException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_SINGULAR_SMEARING, MESSAGE_SINGULAR_SMEARING, detail)


class PartialOutcomeMapException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_PARTIAL_OUTCOME_MAP, MESSAGE_PARTIAL_OUTCOME_MAP, detail)


class TooManyOutcomesException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_TOO_MANY_OUTCOMES, MESSAGE_TOO_MANY_OUTCOMES, detail)


class NonCommutingException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_NON_COMMUTING, MESSAGE_NON_COMMUTING, detail)


class InvalidPovmException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_INVALID_POVM, MESSAGE_INVALID_POVM, detail)


class InvalidStochasticMatrixException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_INVALID_STOCHASTIC_MATRIX, MESSAGE_INVALID_STOCHASTIC_MATRIX, detail)


class InvalidBlochException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_INVALID_BLOCH, MESSAGE_INVALID_BLOCH, detail)


class NonBinaryPovmException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_NON_BINARY_POVM, MESSAGE_NON_BINARY_POVM, detail)


class GridTooSmallException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_GRID_TOO_SMALL, MESSAGE_GRID_TOO_SMALL, detail)


class GridSpacingMismatchException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_GRID_SPACING_MISMATCH, MESSAGE_GRID_SPACING_MISMATCH, detail)


class InvalidGeneratorException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_INVALID_GENERATOR, MESSAGE_INVALID_GENERATOR, detail)


class InvalidQuadratureException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_INVALID_QUADRATURE, MESSAGE_INVALID_QUADRATURE, detail)


class InvalidDirectionException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_INVALID_DIRECTION, MESSAGE_INVALID_DIRECTION, detail)


class InsufficientMomentsException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_INSUFFICIENT_MOMENTS, MESSAGE_INSUFFICIENT_MOMENTS, detail)


class InvalidDistributionException(CoexkitException):
    def __init__(self, detail: str = "") -> None:
        super().__init__(EC_INVALID_DISTRIBUTION, MESSAGE_INVALID_DISTRIBUTION, detail)
