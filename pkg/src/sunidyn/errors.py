"""Exception types shared across the package."""


class UsageError(ValueError):
    """Bad input: kind mismatch, violated precondition, malformed parameters."""


class CapacityError(UsageError):
    """A polynomial would exceed its configured ``degree_cap``."""


class BudgetExhausted(RuntimeError):
    """A bounded search ran out of room.

    ``partial`` carries whatever was found before the search stopped
    (a partial return sequence, the best certificate so far, ...).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DegenerateConstruction(UserWarning):
    """A construction fell back to its trivial branch (e.g. the zero vector)."""


class IllConditioned(UserWarning):
    """A least-squares system had a very large condition number."""
