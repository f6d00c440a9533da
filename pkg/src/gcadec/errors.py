"""Exception hierarchy shared across the toolkit."""


class GcadecError(Exception):
    """Base class for all toolkit errors."""


class GroupError(GcadecError):
    """Invalid group data (non-associative table, bad generators, ...)."""


class HomomorphismError(GcadecError):
    """A map failed the homomorphism check.

    ``witness`` holds the offending pair ``(a, b)`` when one is known.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RuleError(GcadecError):
    """Invalid local rule: arity mismatch or non-commuting images."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(GcadecError):
    """An exhaustive enumeration would exceed the configured budget."""


class InternalInconsistency(GcadecError):
    """Two routes that must agree did not (a decider bug or a search gap)."""


class LemmaVerificationError(InternalInconsistency):
    """The power-equals-shift identity failed on a surjective simple-power leaf."""
