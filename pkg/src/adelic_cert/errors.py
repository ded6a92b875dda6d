"""Exception hierarchy.

``ScopeError`` subclasses mark inputs outside what the tool handles (the
CLI maps them to exit code 2); everything else is a computation failure.
"""


class AdelicError(Exception):
    """Base class for every error raised by this package."""


class ScopeError(AdelicError):
    """Input is outside the supported scope."""


class NotPrime(ScopeError):
    pass


class ReducibleModulus(ScopeError):
    pass


class EvenModulus(ScopeError):
    pass


class OddModulus(ScopeError):
    pass


class ExtensionTooLarge(ScopeError):
    pass


class Reducible(ScopeError):
    pass


class NonSquarefreeDiscriminant(ScopeError):
    pass


class WrongSignature(ScopeError):
    pass


class RamifiedUnsupported(ScopeError):
    pass


class ZeroElement(AdelicError):
    pass


class SingularModel(ScopeError):
    pass


class MinimalityUnknown(AdelicError):
    pass


class BadReduction(AdelicError):
    pass


class CapExceeded(AdelicError):
    pass


class EvidenceMismatch(AdelicError):
    pass


class NotSemistable(AdelicError):
    pass


class MissingFieldHypotheses(AdelicError):
    pass


class PrimeTooSmall(AdelicError):
    pass


class MissingPrerequisite(AdelicError):
    pass


class DuplicateDegreeOnePrime(AdelicError):
    pass


class UnknownPlace(AdelicError):
    pass
