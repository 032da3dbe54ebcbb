"""Exception hierarchy for cosmic.

Every error raised on purpose by the package derives from :class:`CosmicError`
and from the closest built-in exception, so ``except ValueError`` keeps working
for callers that do not know about the package types.
"""


class CosmicError(Exception):
    """Base class for all errors raised by cosmic."""


class ParseError(CosmicError, ValueError):
    """Malformed PD, DT, slope, configuration or CSV text."""


class ValidationError(CosmicError, ValueError):
    """Input that parses but violates a structural invariant."""


class InvalidSlope(CosmicError, ValueError):
    """Slope with m = 0, n = 0 or both zero."""


class ResourceLimit(CosmicError, RuntimeError):
    """A configured crossing cap or recursion budget was exceeded."""


class NonRealResult(CosmicError, ArithmeticError):
    """An imaginary part survived where the result must be real."""


class NotThinConsistent(CosmicError, ValueError):
    """Inputs contradict the homologically thin formula for C_K."""


class InconsistentSystem(CosmicError, ValueError):
    """The delta system of a thin complex has no non-negative solution."""


class DegenerateConstant(CosmicError, ArithmeticError):
    """The normalization constant c_+ vanished."""


class MissingColor(CosmicError, LookupError):
    """Colored Jones values for colors >= 3 were required but not supplied."""


class MissingData(CosmicError, LookupError):
    """Some criteria could not be evaluated for lack of input data.

    Attributes:
        criteria: Tags of the criteria that could not be evaluated.
    """

    def __init__(self, criteria: list[str], knot: str = ""):
        self.criteria = list(criteria)
        self.knot = knot
        where = f" for {knot}" if knot else ""
        super().__init__(f"missing data{where}: {', '.join(self.criteria)}")
