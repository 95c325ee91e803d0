"""Exception hierarchy for the spectral engine, zero finder and certifier."""


class ResonanceError(Exception):
    """Base class for every error raised by the package."""


class PotentialError(ResonanceError, ValueError):
    """Invalid potential description or potential file."""

    def __init__(self, message: str, field: str = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class EngineOverflow(ResonanceError, ArithmeticError):
    """An intermediate Jost quantity exceeded the overflow limit.

    The caller must shrink the window toward the real axis.
    """

    def __init__(self, k: complex, magnitude: float):
        self.k = k
        self.magnitude = magnitude
        super().__init__(f"overflow at k={k}: |value|={magnitude:.3e}")


class NeumannNotConverged(ResonanceError):
    """The series envelope tail could not reach the tolerance."""


class EnvelopeViolation(ResonanceError, AssertionError):
    """A computed quantity exceeded its closed-form envelope."""


class ZeroOnContour(ResonanceError):
    """A zero stayed within the edge distance after all contour retries."""


class QuadratureNotConverged(ResonanceError):
    """The argument-principle integral did not settle on an integer."""


class NonConvergedNewton(ResonanceError):
    """Newton refinement failed and the bisection fallback found no root."""


class IncompleteCoverage(ResonanceError):
    """The requested disk or box is not inside a completeness-flagged window."""


class CenterIsZero(ResonanceError):
    """Jensen's formula needs f(center) != 0."""


class ZeroOnCircle(ResonanceError):
    """A zero lies on the Jensen circle."""
