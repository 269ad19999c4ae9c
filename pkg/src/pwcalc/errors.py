"""Exception hierarchy.

Everything raised on purpose by the library derives from :class:`PWError`,
so callers (the CLI in particular) can separate mathematical/precondition
failures from genuine bugs.
"""


class PWError(ValueError):
    """Base class for precondition and domain failures."""


class NonHermitianInput(PWError):
    pass


class NotPSD(PWError):
    pass


class DimensionMismatch(PWError):
    pass


class DomainError(PWError):
    """A function was evaluated where it is undefined (not merely infinite)."""


class InfiniteValue(PWError):
    """A finite result was requested but the spectral sum contains +inf.

    Use :func:`pwcalc.calculus.pw_apply_extended` for such inputs.
    """


class NotInvertible(PWError):
    pass


class NotCommuting(PWError):
    pass


class NotSelfAdjointConjugate(PWError):
    pass


class UnknownName(PWError):
    pass


class BadParameter(PWError):
    pass


class BadWeights(PWError):
    pass


class FunctionNotContinuous(PWError):
    pass


class PreconditionViolation(PWError):
    pass


class SpectrumOutOfInterval(PWError):
    pass


class ParseError(Exception):
    """Malformed matrix file or report input. Not a :class:`PWError`."""
