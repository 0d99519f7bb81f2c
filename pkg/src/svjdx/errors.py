"""Exception types shared across the pricing engine."""


class SvjdxError(Exception):
    """Base class for engine errors."""


class ModelValidationError(SvjdxError):
    """A market model (or request) violates a structural invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class CFDomainError(SvjdxError):
    """Characteristic-function evaluation left its validity strip.

    Typically triggered by complex arguments whose damped moments explode
    (try lowering the decay parameter delta) or by a degenerate Riccati
    discriminant.
    """


class ConvergenceError(SvjdxError):
    """An iterative procedure failed to converge within its budget."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals
