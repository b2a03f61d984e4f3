"""Exception types shared across the package."""


class QelieError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionMismatch(QelieError):
    pass


class BadParams(QelieError):
    """A constructor was called with parameters outside its admissible range."""


class GramNotPositiveDefinite(QelieError):
    pass


class NotNilpotent(QelieError):
    pass


class NotSolvable(QelieError):
    pass


class NotUnimodular(QelieError):
    pass


class VerificationFailed(QelieError):
    """An a-posteriori consistency check on a computed object broke down."""


class SplitNotOrthogonal(QelieError):
    pass


class SplitInvalid(QelieError):
    pass


class ZeroM(QelieError):
    """The quasi-Einstein parameter m must be nonzero."""


class BadPartition(QelieError):
    pass


class AdANotNormal(QelieError):
    """ad_a fails to commute with its metric adjoint, so the structure
    theorem's hypothesis does not apply."""


class BasisNotHeisenberg(QelieError):
    pass


class ActionsDoNotCommute(QelieError):
    pass


class NotApplicable(QelieError):
    """The requested certificate only exists for specific coefficients."""


class ParseError(QelieError):
    """Malformed input document; carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(QelieError):
    """A syntactically valid document violates a schema invariant."""

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant
