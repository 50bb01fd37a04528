"""Exception types shared across the package."""


class ShortDualError(Exception):
    """Base class for all package errors."""


class ParameterError(ShortDualError, ValueError):
    """Invalid numeric parameters (shift, modulation, grid step, ...)."""


class WindowSpecError(ParameterError):
    """A window specification failed validation.

    ``field`` names the offending field.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class ParameterOutOfRange(ParameterError):
    """Modulation parameter outside the range where the short dual exists."""


class SingularMatrix(ShortDualError):
    """G(x) is numerically singular somewhere on [-a/2, a/2]."""

    def __init__(self, x, abs_det, threshold):
        self.x = float(x)
        self.abs_det = float(abs_det)
        self.threshold = float(threshold)
        super().__init__(f"G(x) singular at x={self.x:.17g}: |det|={self.abs_det:.3e} <= {self.threshold:.3e}")


class DualityNotVerified(ShortDualError):
    """The duality residuals exceed the requested tolerance."""


class IntegrityError(ShortDualError):
    """A region classification reached contradictory conclusions."""
