"""Exception hierarchy; `main` maps each family to an exit code."""
from typing import Optional, Sequence, Tuple

from .constants import EXIT_INVALID_INPUT, EXIT_NUMERICAL_FAILURE


class EllLoewnerError(Exception):
    """Base class for all library errors."""

    exit_code = EXIT_NUMERICAL_FAILURE


class InputError(EllLoewnerError):
    """Invalid input: bad arguments, configuration or out-of-range requests."""

    exit_code = EXIT_INVALID_INPUT


class ConfigError(InputError):
    """Run configuration failed validation."""


class DomainError(InputError):
    """Argument outside the domain of a function (e.g. Im tau below y_min)."""


class RangeError(InputError):
    """Request outside a precomputed trajectory."""


class NoBracketError(InputError):
    """Root is not bracketed and no seed was supplied."""

    def __init__(self, message: str, scan: Optional[Sequence[Tuple[float, float]]] = None):
        super().__init__(message)
        self.scan = list(scan or [])


class NumericalError(EllLoewnerError):
    """Numerical failure during evaluation or integration."""

    exit_code = EXIT_NUMERICAL_FAILURE


class TruncationError(NumericalError):
    """q-series did not meet its tolerance within the term cap."""


class PoleError(NumericalError):
    """Argument within the pole guard of a zero lattice."""

    def __init__(self, message: str, argument: complex = 0j, distance: float = 0.0):
        super().__init__(message)
        self.argument = argument
        self.distance = distance


class RealityError(NumericalError):
    """A quantity that must be real has a significant imaginary part."""


class DegenerateError(NumericalError):
    """Denominator below threshold."""


class BlowUpError(NumericalError):
    """Integration cannot continue past a pole-guard violation."""

    def __init__(self, message: str, y: float, argument: complex = 0j, last_good_y: Optional[float] = None):
        super().__init__(message)
        self.y = y
        self.argument = argument
        self.last_good_y = last_good_y if last_good_y is not None else y


class StepSizeError(NumericalError):
    """Adaptive step fell below h_min."""

    def __init__(self, message: str, y: float):
        super().__init__(message)
        self.y = y


class MaxIterError(NumericalError):
    """Iteration limit reached."""
