"""Exception types shared across the package."""


class QuadmapsError(Exception):
    """Base class for all package-specific errors."""


class MalformedContour(QuadmapsError, ValueError):
    """Contour sequence is not a nonnegative +-1 excursion."""


class InconsistentLabels(QuadmapsError, ValueError):
    """Vertex labels violate the unit-increment rule or disagree between
    visits of the same vertex."""


class MalformedMap(QuadmapsError, ValueError):
    """Half-edge arrays do not form a valid rotation system."""


class NonIntegerGenus(QuadmapsError, ValueError):
    """Euler characteristic is odd; the rotation system is corrupted."""


class NotWellLabeled(QuadmapsError, ValueError):
    """Labeled tree is outside the domain of the quadrangulation builder
    (labels must be nonnegative and the tree must have at least one edge)."""


class RejectionBudgetExceeded(QuadmapsError, RuntimeError):
    """A rejection sampler used up its attempt budget."""


class BudgetExceeded(QuadmapsError, ValueError):
    """An exhaustive enumeration was requested beyond its size guard."""


class EmptySample(QuadmapsError, ValueError):
    """A statistic was requested on an empty sample."""
