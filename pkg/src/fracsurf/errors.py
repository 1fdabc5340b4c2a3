"""Exception types shared across the package."""


class FracsurfError(Exception):
    """Base class for package-specific failures."""


class DomainError(FracsurfError):
    """A point lies outside the domain a field or operation is defined on."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class NumericError(FracsurfError):
    """An evaluation produced a non-finite value.

    Carries the offending point when known.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class AdmissibilityError(FracsurfError):
    """A scale field violates the sup-norm admissibility requirement."""


class ConvergenceError(FracsurfError):
    """Fixed-point iteration exhausted maxIter with residual above tol."""

    def __init__(self, message, deltas=()):
        super().__init__(message)
        self.deltas = tuple(deltas)


class ApproximationError(FracsurfError):
    """A degree schedule ran out before the requested accuracy was reached."""

    def __init__(self, message, best_achieved=None):
        super().__init__(message)
        self.best_achieved = best_achieved


class UnboundedError(FracsurfError):
    """The linear program has unbounded objective."""


class InfeasibleError(FracsurfError):
    """The linear program has no feasible point.

    For the one-sided approximation LP this can only happen when every basis
    field vanishes at some constraint node where the target is negative.
    """


class SpecError(FracsurfError):
    """A field-spec or run-config document failed to parse or validate."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
