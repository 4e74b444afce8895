"""Exception hierarchy shared by every module."""


class StabforgeError(Exception):
    pass


class GroupSpecError(StabforgeError, ValueError):
    """Malformed group spec, element string, or shape mismatch."""


class EnumerationBoundError(StabforgeError):
    pass


class NotACharacterError(StabforgeError, ValueError):
    pass


class NotSecondDegreeError(StabforgeError, ValueError):
    pass


class IsotropicError(StabforgeError, ValueError):
    pass


class NotSubgroupError(IsotropicError):
    pass


class NotIsotropicError(IsotropicError):
    pass


class NotMaximalError(IsotropicError):
    pass


class NotStabilizerGroupError(StabforgeError, ValueError):
    pass


class NotStabilizerStateError(StabforgeError, ValueError):
    pass


class FiberMismatchError(StabforgeError, ValueError):
    pass


class TheoryViolation(StabforgeError, AssertionError):
    """A proven inequality or identity failed numerically.

    Raised only when the arithmetic is broken; a correct build never sees it.
    """
