"""Exception hierarchy shared across the package."""


class BmaError(Exception):
    """Base class for all model and harness errors."""


class DegenerateGeometry(BmaError):
    """Height/volume pair lies outside the ellipsoid model's validity region."""


class NegativeDiscriminant(BmaError):
    """Applied force exceeds what the pressurized cross-section can express."""


class InsufficientData(BmaError):
    """Too few distinct calibration volumes for the requested polynomial degree."""


class IllConditioned(BmaError):
    """Calibration normal equations are numerically unreliable; reduce the degree."""


class OutOfRange(BmaError):
    """Volume outside the calibrated validity range; extrapolation is refused."""


class ParseError(BmaError):
    """Malformed trace or calibration file; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NonMonotoneTime(BmaError):
    """Trace timestamps are not strictly increasing."""


class MissingGroundTruth(BmaError):
    """Evaluation requested on a trace without ground-truth columns."""


class LengthMismatch(BmaError):
    """Series compared for RMSE have different lengths."""


class NoConvergence(BmaError):
    """Simulator fixed point failed to converge within the iteration cap."""
