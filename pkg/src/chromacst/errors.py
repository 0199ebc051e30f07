"""
errors.py
Exception hierarchy. Each class carries the process exit code used by the command line.
Created 17/10/2026
"""


class ChromaCstError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1


class ConfigurationError(ChromaCstError):
    """A job, model or head configuration that cannot be honoured."""

    exit_code = 2


class UnsupportedEncodingError(ConfigurationError):
    pass


class PathError(ConfigurationError):
    """A required file is missing."""

    def __init__(self, path, hint: str = "") -> None:
        self.path = path
        self.hint = hint
        message = f"Missing file: {path}."
        if hint:
            message += f" {hint}"
        super().__init__(message)


class DataError(ChromaCstError):
    """Input data violates a precondition."""

    exit_code = 3


class InvalidWhitePointError(DataError):
    pass


class DegenerateColorError(DataError):
    pass


class DegenerateAnchorError(DataError):
    pass


class DegenerateWhiteError(DataError):
    pass


class EncodingError(DataError):
    pass


class ExtractionError(DataError):
    def __init__(self, message: str, patch_index: int) -> None:
        self.patch_index = patch_index
        super().__init__(f"Patch {patch_index}: {message}")


class SpectralGridError(DataError):
    pass


class SynthesisError(DataError):
    pass


class SplitError(DataError):
    pass


class BlendingError(DataError):
    pass


class ComparisonError(DataError):
    pass


class NumericError(ChromaCstError):
    """A numerical procedure failed."""

    exit_code = 4


class DegenerateMappingError(NumericError):
    pass


class NonFiniteModelError(NumericError):
    pass


class TrainingDivergenceError(NumericError):
    def __init__(self, iteration: int, message: str = "Non-finite loss or gradient.") -> None:
        self.iteration = iteration
        super().__init__(f"Training diverged at iteration {iteration}: {message}")


class FitFailureError(NumericError):
    def __init__(self, residual: float, message: str = "Minimizer did not converge.") -> None:
        self.residual = residual
        super().__init__(f"{message} Final residual: {residual:.6g}.")
