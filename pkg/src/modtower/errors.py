"""Typed errors shared across the workbench.

Every error a caller can act on has its own class; internal bug traps
(assertions that must never fire on correct inputs) use InternalCheckFailed
subclasses so the CLI can map them to a distinct exit code.
"""


class ModtowerError(Exception):
    pass


# field construction
class NonPrimeP(ModtowerError):
    pass


class ReducibleModulus(ModtowerError):
    pass


class OrderTooLarge(ModtowerError):
    pass


class FieldMismatch(ModtowerError):
    pass


# linear algebra
class DimensionMismatch(ModtowerError):
    pass


class NotSquare(ModtowerError):
    pass


# groups
class BadIndex(ModtowerError):
    pass


class MixedParents(ModtowerError):
    pass


class NotNormal(ModtowerError):
    pass


class SearchBudgetExceeded(ModtowerError):
    pass


class GroupMismatch(ModtowerError):
    pass


class TooLarge(ModtowerError):
    pass


# modules / endo
class IsoUndecided(ModtowerError):
    pass


class NotIndecomposable(ModtowerError):
    pass


class NotHEquivariant(ModtowerError):
    pass


# relative projectivity
class IndexDivisibleByP(ModtowerError):
    pass


class NoSourceFound(ModtowerError):
    pass


# towers
class LevelMismatch(ModtowerError):
    pass


class IncompatibleSubgroupTower(ModtowerError):
    pass


class NotIndecomposableAtLevel(ModtowerError):
    pass


class HypothesisViolated(ModtowerError):
    """Raised by tower checks whose group-theoretic hypothesis fails.

    Carries the partially computed report so callers can inspect what the
    violated case actually does.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# bug traps: these must never fire on correct inputs
class InternalCheckFailed(ModtowerError):
    pass


class CriteriaDisagree(InternalCheckFailed):
    pass


class MonotonicityViolated(InternalCheckFailed):
    pass


# CLI
class ParseError(ModtowerError):
    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class VerificationFailure(ModtowerError):
    pass
