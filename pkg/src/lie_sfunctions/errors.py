"""Exception hierarchy."""


class LieSError(Exception):
    """Base class for all engine errors."""


class DivisionByZero(LieSError, ZeroDivisionError):
    pass


class InexactDivision(LieSError, ArithmeticError):
    pass


class ZeroDenominator(LieSError, ZeroDivisionError):
    pass


class UnknownVariable(LieSError, KeyError):
    def __str__(self):
        return f"unknown variable {self.args[0]!r}" if self.args else "unknown variable"


class NonBilinearSystem(LieSError, ValueError):
    pass


class SolverBudgetExceeded(LieSError):
    """Raised when the branch budget runs out.

    ``partial`` holds whatever solutions were found before the budget ran out
    and ``abandoned`` counts the branches that were never explored.
    """

    def __init__(self, message, partial=None, abandoned=0):
        super().__init__(message)
        self.partial = list(partial or [])
        self.abandoned = abandoned


class DegenerateEigenpoly(LieSError, ValueError):
    pass


class ZeroSFunction(LieSError, ValueError):
    pass


class NoSymmetryWithinBounds(LieSError):
    pass


class NonRationalLogDerivative(LieSError, ValueError):
    pass


class UndecidedZeroTest(LieSError):
    pass


class DegenerateSPair(LieSError, ValueError):
    pass


class ClosednessFailure(LieSError):
    pass


class VerificationFailure(LieSError):
    """An internally produced result failed its own exact re-check."""


class ParseError(LieSError, ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        super().__init__(str(first) if first else "parse error")
