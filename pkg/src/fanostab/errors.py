"""Exception hierarchy shared by all fanostab modules."""


class FanostabError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateInput(FanostabError):
    """Both inputs zero, or an identically-zero germ where a curve was expected."""


class IncompleteSubstitution(FanostabError):
    """A substitution map does not cover every variable of the polynomial."""


class WrongMultiplicity(FanostabError):
    """Square completion requires a germ of multiplicity exactly two."""


class NeedsLinearPreparation(FanostabError):
    """The y^2 coefficient vanishes; apply a linear change of coordinates first."""


class WrongDegree(FanostabError):
    """Exponents passed to the blow-up pushforward must sum to four."""


class NotSemiInvariant(FanostabError):
    """The quadric is not semi-invariant for the one-parameter subgroup."""

    def __init__(self, weights):
        self.weights = tuple(weights)
        super().__init__(f"quadric mixes weights {sorted(set(self.weights))}")


class NotInFiber(FanostabError):
    """The cubic lies in q*(linear forms), so it defines no point of the fibre."""


class OutOfRange(FanostabError):
    """Argument outside the admissible interval."""


class NotReduced(FanostabError):
    """The curve has a multiple component."""


class UnsupportedQuadric(FanostabError):
    """Quadric rank too small for surface-level computations."""


class UnresolvedRoots(FanostabError):
    """A root field of degree >= 3 over Q was needed; the factor is reported."""

    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"unresolved factor: {factor}")


class NotADoublePoint(FanostabError):
    """The chosen vertex is not a double point of the cubic threefold."""


class DegreeMismatch(FanostabError):
    """Parsed polynomial fails the homogeneity/bidegree requirement."""


class ParseError(FanostabError):
    """Syntax error in a polynomial expression."""

    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class IncompleteGeometry(FanostabError):
    """Singular-point data could not be fully resolved; lists what is missing."""

    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__("unresolved geometry: " + "; ".join(str(m) for m in self.missing))


class NotEven(FanostabError):
    """Riemann-Roch degree must be even."""


class DimensionMismatch(FanostabError):
    """Vector length does not match the lattice rank."""
