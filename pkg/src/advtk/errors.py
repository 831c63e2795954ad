"""Exception hierarchy shared by every module."""


class AdvtkError(Exception):
    """Base class for all library errors."""


class DomainError(AdvtkError, ValueError):
    """Malformed function, input string, restriction or witness."""


class ResourceCapError(AdvtkError):
    """A configured size cap would be exceeded."""


class NoCrossPairsError(DomainError):
    """The function has only one label present."""


class InfiniteWitnessError(AdvtkError, ArithmeticError):
    """A witness assigns zero overlap to some cross pair."""

    def __init__(self, x, y, message=None):
        self.x = x
        self.y = y
        super().__init__(message or f"infinite witness value at pair ({x}, {y})")


class FormulaSyntaxError(AdvtkError, ValueError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class FormulaMismatchError(AdvtkError, ValueError):
    """A formula disagrees with the function it was supposed to compute."""

    def __init__(self, counterexample):
        self.counterexample = counterexample
        super().__init__(f"formula does not compute the function on input {counterexample}")


class VerificationError(AdvtkError):
    """A structural check on a produced object failed."""
