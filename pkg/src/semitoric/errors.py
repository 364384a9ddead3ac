"""Exception hierarchy shared by every module."""


class SemitoricError(Exception):
    """Base class; the CLI maps subclasses onto exit codes."""

    exit_code = 3


class DomainError(SemitoricError):
    exit_code = 2


class NumericFailure(SemitoricError):
    exit_code = 3


class OutOfFocusFocusRange(DomainError):
    pass


class OutsidePhysicalRegion(DomainError):
    pass


class ModulusOutOfRange(DomainError):
    pass


class RegimeViolation(DomainError):
    pass


class OnSeparatrix(DomainError):
    pass


class SingularFibre(DomainError):
    pass


class OriginSingular(DomainError):
    pass


class DegenerateCycle(NumericFailure):
    pass


class ComplexRootsError(DomainError):
    pass


class QuadratureFailure(NumericFailure):
    pass


class NonInvertibleLinearPart(NumericFailure):
    pass


class IllConditionedFit(NumericFailure):
    pass


class NoMatchingPolygon(NumericFailure):
    pass
