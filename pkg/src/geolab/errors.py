"""Exception types shared by every module."""


class DomainError(ValueError):
    """An input violates a stated precondition (coprimality, range, primality...)."""


class InconsistencyError(ArithmeticError):
    """Two independent computations of the same quantity disagree."""

    def __init__(self, identity, detail=""):
        self.identity = identity
        msg = identity if not detail else f"{identity}: {detail}"
        super().__init__(msg)


class SearchExhausted(RuntimeError):
    """A parameter search hit its configured ceiling without meeting the target."""
