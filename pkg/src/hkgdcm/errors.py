"""Exception hierarchy shared by all modules."""


class HkError(Exception):
    """Base class for every error raised by the package."""

    code = "error"


class DimensionMismatchError(HkError, ValueError):
    code = "dimension_mismatch"

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NonHermitianError(HkError, ValueError):
    code = "non_hermitian"


class DegenerateGroundStateError(HkError):
    code = "degenerate_ground_state"

    def __init__(self, message, multiplicity=None):
        super().__init__(message)
        self.multiplicity = multiplicity


class ConvergenceError(HkError, RuntimeError):
    code = "no_convergence"


class InvalidModelError(HkError, ValueError):
    code = "invalid_model"
