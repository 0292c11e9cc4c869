"""Shared exception types."""


class CapExceededError(ValueError):
    """A term count exceeded its configured feasibility cap and no override was given."""


class RankDeficientError(ValueError):
    """The fitting system is inconsistent under every allowed normalization."""

    def __init__(self, message, deficiency=None):
        super().__init__(message)
        self.deficiency = deficiency


class InsufficientTermsError(ValueError):
    """Not enough exact series terms for the requested operation."""


class VanishingMultiplierError(ArithmeticError):
    """The recurrence multiplier vanished at some index; partial results attached."""

    def __init__(self, message, index, partial):
        super().__init__(message)
        self.index = index
        self.partial = partial


class AllFitsFailedError(RuntimeError):
    """No approximant in the ensemble could be fitted."""
