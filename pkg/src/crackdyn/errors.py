class NumericalError(RuntimeError):
    """A numerical procedure failed (root search, eigensolve, time stepping)."""


class RootSearchError(NumericalError):
    pass


class EigenSolveError(NumericalError):
    pass


class InstabilityError(NumericalError):
    """Time integration produced non-finite values or runaway energy."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time
