"""Exception types shared across the library."""


class NumericsError(ArithmeticError):
    """A numerical routine could not complete."""


class SingularMatrixError(NumericsError):
    """Factorization failed even after the allowed jitter escalation."""


class NotPsdError(NumericsError):
    """An eigenvalue lies below the positive-semidefinite tolerance."""


class ConvergenceError(NumericsError):
    """An iterative solver hit its iteration cap."""


class ValidationError(ValueError):
    """Invalid input: bad points, mismatched shapes, malformed configs."""
