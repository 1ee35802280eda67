"""Exception hierarchy shared by all modules."""


class TwistGroupError(Exception):
    pass


class RingMismatch(TwistGroupError):
    pass


class NonUnit(TwistGroupError, ZeroDivisionError):
    pass


class NotAPthPower(TwistGroupError):
    pass


class NoTitsEndo(TwistGroupError):
    pass


class NotAField(TwistGroupError):
    pass


class DimMismatch(TwistGroupError):
    pass


class Singular(NonUnit):
    pass


class NotInSpan(TwistGroupError):
    pass


class WrongCharacteristic(TwistGroupError):
    pass


class NotMember(TwistGroupError):
    """Raised by membership predicates; ``entry`` locates the first mismatch."""

    def __init__(self, message, entry=None):
        super().__init__(message)
        self.entry = entry


class NotFormPreserving(NotMember):
    pass


class NotInLieAlgebra(TwistGroupError):
    pass


class NotOrthogonal(TwistGroupError):
    pass


class NotSymplectic(TwistGroupError):
    pass


class NotInSCliff(TwistGroupError):
    pass


class ParamNotInSubring(TwistGroupError):
    pass


class LimitExceeded(TwistGroupError):
    """BFS closure passed its element cap; ``partial`` holds what was found."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ElementNotInGroup(TwistGroupError):
    pass
