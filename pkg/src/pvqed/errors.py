"""Exception hierarchy shared by all modules."""


class PVQEDError(Exception):
    """Base class for library errors."""


class DomainError(PVQEDError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class DegenerateMasses(DomainError):
    """Pauli-Villars masses are not strictly increasing."""


class NonFiniteEvaluation(PVQEDError, ArithmeticError):
    """An integrand returned inf or nan."""


class SeriesTruncation(PVQEDError, ArithmeticError):
    """A series hit its term limit before reaching the requested tolerance."""


class ParseError(PVQEDError, ValueError):
    """A field file row could not be parsed."""


class NonUniformGrid(PVQEDError, ValueError):
    """Grid coordinates are not uniformly spaced."""


class IncompleteGrid(PVQEDError, ValueError):
    """Grid file does not contain every cell of the bounding box."""


class GridTooSmall(PVQEDError, ValueError):
    """Grid has fewer than three cells along some axis."""


class ResampleError(PVQEDError, ValueError):
    """Rescaled grid would have fewer than three cells along some axis."""
