"""Exception hierarchy shared by every module.

All library errors derive from :class:`DivFreeError` so the command line
front end can turn them into a structured message and exit code 3.
"""


class DivFreeError(Exception):
    """Base class for all errors raised by :mod:`divfree`."""


class DegenerateLattice(DivFreeError):
    pass


class NotInGamma(DivFreeError):
    pass


class ParamsMismatch(DivFreeError):
    pass


class IndexOutOfRange(DivFreeError):
    pass


class LengthMismatch(DivFreeError):
    pass


class ZeroPart(DivFreeError):
    pass


class NotInDAlphaRho(DivFreeError):
    pass


class AdmissibilityViolated(DivFreeError):
    pass


class RequiresL1(DivFreeError):
    pass


class InvariantMismatch(DivFreeError):
    pass


class WitnessInvalid(DivFreeError):
    pass


class LiftValidationFailed(DivFreeError):
    pass


class InvalidHandle(DivFreeError):
    pass


class NotInS(DivFreeError):
    pass


class HypothesisViolated(DivFreeError):
    pass


class ArityError(DivFreeError):
    pass


class ExpressionSyntaxError(DivFreeError):
    """Raised by the expression parser; carries a 1-based line and column."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column
