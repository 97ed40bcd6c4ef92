"""Exception classes shared across the package."""


class Error(Exception):
    """Base class for all package errors."""


class InvalidWalk(Error):
    """Walk references missing edges or its edges do not compose."""


class NotSquare(Error):
    """Operation requires a square matrix."""


class Singular(Error):
    """Matrix is not invertible over its scalar ring."""


class SeriesConstantTermSingular(Singular):
    """Constant-term matrix of a series matrix is singular."""


class IndexOutOfRange(Error):
    """Row or column index outside the matrix."""


class Divergent(Error):
    """Numeric walk-matrix evaluation rejected: spectral radius too large."""


class AbsorbingInterior(Error):
    """Interior block of the network cannot be eliminated numerically."""


class NotDisjoint(Error):
    """Boundary subsets must be disjoint."""


class SizeMismatch(Error):
    """Index sets must have equal cardinality."""


class DriftViolation(Error):
    """Bernoulli walk closed forms require p > 1/2."""


class DomainError(Error):
    """Argument outside the mathematical domain of the function."""


class OrderingError(DomainError):
    """Grid arguments violate the required monotone ordering."""


class ParseError(Error):
    """Network document cannot be parsed."""


class SelfCheckError(Error):
    """Internal cross-check between two computation routes failed."""


class TruncationTooSmall(UserWarning):
    """No walk family fits within the requested truncation order."""
