"""Exception hierarchy shared by every padiclab module.

Recoverable precision failures derive from :class:`PrecisionFailure`; the CLI
maps that family to exit status 2.
"""


class PadicError(Exception):
    """Base class for all padiclab errors."""


class DomainError(PadicError, ValueError):
    """An operand lies outside the domain of the operation."""


class NotASquare(DomainError):
    """The operand has no square root in Qp."""


class HenselHypothesisFailure(DomainError):
    """|f(a)| < |f'(a)|^2 could not be certified at the available precision."""


class ScalarSyntaxError(PadicError, ValueError):
    """Malformed scalar, polynomial or matrix literal."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class PrecisionFailure(PadicError, ArithmeticError):
    """Base class for failures cured by raising the working precision."""


class PrecisionError(PrecisionFailure):
    """Raised by the stabilized algorithms when the input precision is too low."""


class InexactZeroDivision(PrecisionFailure, ZeroDivisionError):
    """Division by a value indistinguishable from zero."""

    def __init__(self, message: str = "division by an inexact zero", term: int | None = None):
        super().__init__(message)
        self.term = term


class PrecisionInsufficient(PrecisionFailure):
    """A pivot, determinant or lift target exceeds the precision at hand."""


class ValuationCapExceeded(PrecisionFailure):
    """No nonzero digit was found below the valuation search bound."""


class SurjectivityFailure(PrecisionFailure):
    """A column of the scaled Jacobian vanishes at working precision."""

    def __init__(self, column: int):
        super().__init__(f"differential is not surjective on output {column}")
        self.column = column


class LiftPolicyFailure(PrecisionFailure):
    """A step's output precision is not contained in its minimal lattice."""

    def __init__(self, step: int, detail: str = ""):
        message = f"step {step}: output precision misses the minimal lattice"
        super().__init__(f"{message} ({detail})" if detail else message)
        self.step = step


class ContractionViolation(PadicError, RuntimeError):
    """A fixed-point rule read a digit of itself that is not yet defined."""

    def __init__(self, index: int, position: int):
        super().__init__(
            f"rule producing digit {position} requested its own digit {index}"
        )
        self.index = index
        self.position = position
