"""Exception hierarchy shared by every module."""


class HadakernError(Exception):
    """Base class for all library errors."""


class ArithmeticDomainError(HadakernError, TypeError):
    """Operands belong to incompatible scalar domains."""


class UnsupportedDomainError(HadakernError, TypeError):
    """Operation is undefined for the scalar domain (e.g. modulus in GF(p))."""


class ShapeError(HadakernError, ValueError):
    pass


class SymmetryError(HadakernError, ValueError):
    """Input claimed to be Hermitian is not."""


class InvalidIndexSet(HadakernError, ValueError):
    pass


class InvalidOrder(HadakernError, ValueError):
    pass


class NotApplicable(HadakernError, ValueError):
    """The input does not satisfy the hypothesis of the requested check."""


class UnsupportedGroup(HadakernError, ValueError):
    pass


class NotThreePmp(HadakernError, ValueError):
    """Input fails the 3-PMP hypothesis; ``witness`` is a violating index set."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EntriesNotUnimodular(HadakernError, ValueError):
    pass


class VerificationFailed(HadakernError, AssertionError):
    """A post-condition guaranteed by theory did not hold (bug trap)."""


class ConditionsViolated(HadakernError, ValueError):
    pass


class NotBlockConstant(HadakernError, ValueError):
    def __init__(self, message, blocks=None):
        super().__init__(message)
        self.blocks = blocks


class RefinementHypothesisFailed(HadakernError, ValueError):
    pass


class InvalidCoefficients(HadakernError, ValueError):
    pass


class InvalidGenerator(HadakernError, ValueError):
    pass


class ParseError(HadakernError, ValueError):
    pass
