"""Exception and warning types raised across linelab."""


class LinelabError(Exception):
    """Base class for all linelab errors."""


class SpecError(LinelabError, ValueError):
    """Malformed input document; message carries the field path."""


class DegenerateInterval(LinelabError, ValueError):
    pass


class NonFinite(LinelabError, ArithmeticError):
    pass


class PieceDepthExceeded(LinelabError):
    """A stage map was asked to resolve a piece beyond its depth cap."""

    def __init__(self, x, cap):
        super().__init__(f"piece index beyond cap {cap} near x={x!r}")
        self.x = x
        self.cap = cap


class NonDifferentiablePoint(LinelabError):
    def __init__(self, x, left, right):
        super().__init__(f"one-sided derivatives differ at {x!r}: {left!r} vs {right!r}")
        self.x = x
        self.left = left
        self.right = right


class Inconclusive(LinelabError):
    """A numerical decision fell inside its uncertainty band."""


class RankCapExceeded(LinelabError):
    pass


class BudgetExhausted(LinelabError):
    """Search ran out of budget; ``partial`` holds whatever was built."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NoSeedElement(LinelabError):
    pass


class SeriesViolation(LinelabError):
    pass


class OrderViolation(LinelabError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class DisjointnessFailure(LinelabError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class HasFixedPoints(LinelabError):
    pass


class WindowEscape(LinelabError):
    pass


class NotFree(LinelabError):
    def __init__(self, message, word=None):
        super().__init__(message)
        self.word = word


class DegenerateTau(LinelabError):
    pass


class GapsNotInvariant(LinelabError):
    def __init__(self, message, generator=None, gap=None):
        super().__init__(message)
        self.generator = generator
        self.gap = gap


class OrbitAccumulates(LinelabError):
    pass


class Unclassified(LinelabError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class GridTooCoarse(UserWarning):
    """Advisory: two sign changes were found in adjacent grid cells."""
