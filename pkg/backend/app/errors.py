# backend/app/errors.py
"""
Exception hierarchy. Every error carries the CLI exit code it maps to:
2 for bad input or usage, 1 for a mathematical check that failed.
"""


class SKTError(Exception):
    exit_code = 1


# --- Input / usage errors (exit 2) ---

class InputError(SKTError):
    exit_code = 2


class SalamonSyntaxError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundParameterError(InputError):
    pass


class SchemaValidationError(InputError):
    pass


class UnknownAlgebraError(InputError):
    pass


class ParameterRangeError(InputError):
    pass


class DimensionMismatchError(InputError):
    pass


class UnsupportedArityError(InputError):
    pass


# --- Mathematical failures (exit 1) ---

class CheckFailure(SKTError):
    exit_code = 1


class JacobiViolationError(CheckFailure):
    def __init__(self, residual: float):
        super().__init__(f"Jacobi identity violated (residual {residual:.3e})")
        self.residual = residual


class ShearDataError(CheckFailure):
    pass


class ComplexStructureError(CheckFailure):
    pass


class MetricError(CheckFailure):
    pass


class PreconditionError(CheckFailure):
    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message if residual is None else f"{message} (residual {residual:.3e})")
        self.residual = residual


class DiagonalizationError(CheckFailure):
    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message if residual is None else f"{message} (residual {residual:.3e})")
        self.residual = residual


class SearchFailure(CheckFailure):
    pass


class ConstraintResidualError(CheckFailure):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual
