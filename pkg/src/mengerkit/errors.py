"""Exception types shared across the package."""


class MengerError(Exception):
    pass


class DimensionError(MengerError, ValueError):
    """Arity or carrier mismatch between functions, or an index out of range."""


class ClosureCapError(MengerError):
    """A fixed-point closure grew past the configured element cap."""

    def __init__(self, cap: int):
        super().__init__(f"closure exceeded cap of {cap} elements")
        self.cap = cap


class PreconditionError(MengerError):
    """A construction was called on an input that does not satisfy its hypotheses."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ConstructionError(MengerError, AssertionError):
    """An internal assertion on a constructed object failed."""


class UnionConflictError(MengerError):
    def __init__(self, element: int, point: tuple, values: tuple):
        super().__init__(
            f"union is not a function: element {element} at {point} takes values {values}"
        )
        self.element = element
        self.point = point
        self.values = values


class DocumentError(MengerError, ValueError):
    """Malformed or inconsistent input document."""
