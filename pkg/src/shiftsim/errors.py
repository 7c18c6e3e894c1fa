"""Exception types shared across the package."""


class ShiftSimError(Exception):
    """Base class for all library-specific errors."""


class PoleInDisc(ShiftSimError):
    """A rational function has a pole inside (or too close to) the unit disc."""

    def __init__(self, poles, message=None):
        self.poles = list(poles)
        super().__init__(message or f"poles inside the unit disc: {self.poles}")


class PoleOnCircle(ShiftSimError):
    """A pole sits inside the boundary band where a split is required."""

    def __init__(self, poles, message=None):
        self.poles = list(poles)
        super().__init__(message or f"poles on or too near the unit circle: {self.poles}")


class PoleAt(ShiftSimError):
    """Evaluation point coincides with a pole."""

    def __init__(self, point, message=None):
        self.point = point
        super().__init__(message or f"evaluation point {point} is (numerically) a pole")


class PhiZero(ShiftSimError):
    """The kernel symbol is identically zero, so the algebra is undefined."""


class IdenticallyZero(ShiftSimError):
    """Zero localization was asked for the zero function."""


class SingularBlock(ShiftSimError):
    """A triangular lifting block is numerically singular."""

    def __init__(self, node, diag, message=None):
        self.node = node
        self.diag = diag
        super().__init__(
            message
            or f"singular lifting block at node {node} (diagonal ~ {abs(diag):.3e}); "
            "the node is numerically at a symbol zero that was not registered"
        )


class NotCircleInvertible(ShiftSimError):
    """The element has no inverse for the circle operation."""

    def __init__(self, reasons):
        self.reasons = list(reasons)
        super().__init__("not circle-invertible: " + "; ".join(self.reasons))


class NoCircleSolution(ShiftSimError):
    """The circle equation r o t = s has no solution t."""

    def __init__(self, reasons):
        self.reasons = list(reasons)
        super().__init__("no circle solution: " + "; ".join(self.reasons))


class BoundaryAmbiguous(ShiftSimError):
    """Zeros inside the boundary band make the requested decision ambiguous."""

    def __init__(self, details, message=None):
        self.details = list(details)
        super().__init__(
            message or "boundary-band zeros make the verdict ambiguous: "
            + "; ".join(str(d) for d in self.details)
        )


class TruncationUnsound(ShiftSimError):
    """The truncation order is too small for the requested spectral verdict."""

    def __init__(self, estimate, threshold):
        self.estimate = estimate
        self.threshold = threshold
        super().__init__(
            f"truncation tail estimate {estimate:.3e} exceeds {threshold:.3e}; "
            "increase the truncation order"
        )


class IndeterminateKernel(ShiftSimError):
    """The singular-value gap check failed, so the kernel dimension is unreliable."""

    def __init__(self, singular_values, threshold):
        self.singular_values = singular_values
        self.threshold = threshold
        super().__init__(
            "singular values give no clean gap at threshold "
            f"{threshold:.3e}: {singular_values}"
        )


class ChainBreaks(ShiftSimError):
    """A Jordan chain stops being a chain at some step.

    This is flow control more than failure: the break index is exactly the
    point where the kernel dimension saturates.  The vectors computed so far
    are kept on the exception.
    """

    def __init__(self, step, residual, chain):
        self.step = step
        self.residual = residual
        self.chain = list(chain)
        super().__init__(
            f"chain condition fails at step {step} (residual {residual:.3e})"
        )


class BezoutIllConditioned(ShiftSimError):
    """The Bezout identity residual is too large to trust the cofactors."""

    def __init__(self, residual, threshold):
        self.residual = residual
        self.threshold = threshold
        super().__init__(
            f"Bezout residual {residual:.3e} exceeds {threshold:.3e}; "
            "inputs are numerically non-coprime or ill-conditioned"
        )
