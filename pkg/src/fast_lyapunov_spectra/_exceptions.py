"""Domain errors; every class is a ValueError so callers may treat them uniformly."""


class MarkovRenyiError(ValueError):
    """Base class for every domain error raised by this package."""


class MapSpecificationError(MarkovRenyiError):
    """A map-spec document is malformed or describes an impossible map."""


class ExceptionalSetError(MarkovRenyiError):
    """A point lies on a branch boundary or outside the union of branch intervals."""


class ExceptionalOrbitError(ExceptionalSetError):
    """An orbit point hits the exceptional set at a given step."""

    def __init__(self, message: str, step: int) -> None:
        super().__init__(message, step)
        self.step = step

    def __str__(self) -> str:
        return self.args[0]


class HypothesisViolationError(MarkovRenyiError):
    """A standing hypothesis failed a finite-scale check."""


class TruncationError(MarkovRenyiError):
    """A search over an infinite tail ran out of defined values or scan budget."""


class ConstructionError(MarkovRenyiError):
    """An explicit construction could not be carried out at the requested index."""


class BudgetExceededError(MarkovRenyiError):
    """An exact computation would exceed its bit or node budget."""
