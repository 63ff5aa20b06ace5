"""Exception hierarchy.

Each top-level class maps to one CLI exit code (see ``EXIT_CODES``).
"""


class SignCountError(Exception):
    exit_code = 1


class InvalidInput(SignCountError):
    """Mathematically invalid or degenerate input."""

    exit_code = 2


class ParseError(SignCountError):
    exit_code = 3


class GuardrailExceeded(SignCountError):
    exit_code = 4


class CrossCheckFailure(SignCountError):
    """Two independent computations disagree, or a proven identity failed."""

    exit_code = 5


class DegenerateInput(InvalidInput):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonPositiveEntry(InvalidInput):
    pass


class IndexOutOfRange(InvalidInput):
    pass


class EqualIndices(IndexOutOfRange):
    pass


class EmptyInterval(InvalidInput):
    pass


class EvenCardinality(InvalidInput):
    pass


class NotEvenMap(InvalidInput):
    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class NotOddMap(InvalidInput):
    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class OddProduct(InvalidInput):
    pass


class EvenM(InvalidInput):
    pass


class NotSquarefree(InvalidInput):
    pass


class TooFewFactors(InvalidInput):
    pass


class ZeroNormal(InvalidInput):
    pass


class DegenerateProjection(DegenerateInput):
    pass


class DegeneratePointSet(DegenerateInput):
    pass


class NoValidDirectionFound(InvalidInput):
    pass


class TooManyElements(GuardrailExceeded):
    pass


class TooLargeToFactor(GuardrailExceeded):
    pass


class TooManyPrimeFactors(GuardrailExceeded):
    pass


class NotDivisibleByFour(CrossCheckFailure):
    pass


class MethodMismatch(CrossCheckFailure):
    pass


class PropositionViolated(CrossCheckFailure):
    pass


EXIT_CODES = {
    InvalidInput: 2,
    ParseError: 3,
    GuardrailExceeded: 4,
    CrossCheckFailure: 5,
}
