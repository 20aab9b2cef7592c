"""
Exception hierarchy.

Errors fall in three groups: bad input (parse and catalog errors), exact
arithmetic edge cases, and failed verifications. The CLI maps the first group
to exit status 2 and every VerificationFailure to exit status 1.
"""


class WLevelsError(Exception):
    """Base class for all package errors."""


# =============================================================================
# INPUT ERRORS
# =============================================================================


class ParseError(WLevelsError, ValueError):
    """An algebra spec or level string could not be parsed."""

    def __init__(self, text: str, token: str, reason: str = 'unexpected token'):
        self.text = text
        self.token = token
        super().__init__(f"{reason} {token!r} in {text!r}")


class ExcludedAlgebra(WLevelsError, ValueError):
    """The algebra has no usable minimal grading in this setting."""


class InvalidParameter(WLevelsError, ValueError):
    """A family parameter is outside its allowed range."""


class UnsupportedRealization(WLevelsError):
    """No structure-constant realization exists for this family."""


class UnsupportedN(WLevelsError, ValueError):
    """The free-field realization is not available for this n."""


# =============================================================================
# ARITHMETIC
# =============================================================================


class ZeroPolynomial(WLevelsError, ArithmeticError):
    pass


class ZeroDivisor(WLevelsError, ZeroDivisionError):
    pass


class IrrationalSolutions(WLevelsError, ArithmeticError):
    """A cleared equation has roots outside the rationals."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"non-split residual factors: {residual}")


# =============================================================================
# VERIFICATION FAILURES
# =============================================================================


class VerificationFailure(WLevelsError):
    """A computed identity or table entry did not match."""


class GradingViolation(VerificationFailure):
    pass


class NotScalar(VerificationFailure):
    pass


class DegenerateForm(VerificationFailure):
    pass


class PoleNotCancelled(VerificationFailure):
    pass


class InconsistentPairs(VerificationFailure):
    pass


class NoNondegeneratePair(VerificationFailure):
    pass


class MismatchAt(VerificationFailure):
    """Two sides of an identity differ; carries the exact discrepancy."""

    def __init__(self, where, term: str, discrepancy):
        self.where = where
        self.term = term
        self.discrepancy = discrepancy
        super().__init__(f"{term} mismatch at {where}: {discrepancy}")


class NotCollapsing(VerificationFailure):
    pass


class SetMismatch(VerificationFailure):
    """Two level sets differ; carries both one-sided differences."""

    def __init__(self, label: str, missing, unexpected):
        self.missing = missing
        self.unexpected = unexpected
        super().__init__(
            f"{label}: missing {sorted(missing)}, unexpected {sorted(unexpected)}"
        )


class HomomorphismFailure(VerificationFailure):
    def __init__(self, a, b, discrepancy):
        self.a = a
        self.b = b
        self.discrepancy = discrepancy
        super().__init__(f"gamma bracket fails at ({a}, {b}): {discrepancy}")


class ChargeMismatch(VerificationFailure):
    pass
