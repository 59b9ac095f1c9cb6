"""Exception hierarchy.  Everything a caller can trigger with valid syntax but
bad mathematics derives from :class:`MathError` (the CLI maps it to exit 1)."""

from __future__ import annotations


class MathError(Exception):
    """Base class for mathematical precondition failures."""


class BadGCM(MathError):
    pass


class NotFree(MathError):
    pass


class PairingMismatch(MathError):
    pass


class YNotBetween(MathError):
    pass


class NotFinite(MathError):
    pass


class NotSpherical(MathError):
    pass


class NotPreordered(MathError):
    pass


class Undecidable(MathError):
    pass


class VertexMismatch(MathError):
    pass


class OrderViolation(MathError):
    pass


class NotGeneric(MathError):
    pass


class NotReduced(MathError):
    pass


class NotLambdaPath(MathError):
    pass


class ChainNotFound(MathError):
    pass


class BasePointOnPath(MathError):
    pass


class SearchBudgetExceeded(MathError):
    pass


class OutsideProvenCases(MathError):
    pass


class NotInW(MathError):
    """The element is not in the semigroup W^+ (its translation part lies
    outside the Tits cone)."""


class SystemMismatch(MathError):
    pass


class MissingVariable(MathError):
    pass


class NotClassical(MathError):
    pass


class NotCoroot(MathError):
    pass


class SignMismatch(MathError):
    """Two chambers were expected to have equal (or opposite) signs."""


class WrongCase(MathError):
    pass
