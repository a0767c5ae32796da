"""Exception hierarchy shared by every layer of the calculus."""


class CalculusError(Exception):
    """Base class for all errors raised by causalcalc.

    ``offset``, when known, is a byte offset into the UTF-8 source text.
    """

    def __init__(self, message="", offset=None):
        self.offset = offset
        self.bare = message
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)

    def at(self, offset):
        """Same error, located at ``offset`` unless already located."""
        if self.offset is not None:
            return self
        return type(self)(self.bare, offset)


class TypeMismatch(CalculusError):
    pass


class BadMatrix(CalculusError):
    pass


class BadWeight(CalculusError):
    pass


class TermSyntaxError(CalculusError):
    pass


class InvalidEvent(CalculusError):
    pass


class NeedProbes(CalculusError):
    pass


class NotFinite(CalculusError):
    pass


class NotAFunction(CalculusError):
    pass


class BadCode(CalculusError):
    pass


class BadParam(CalculusError):
    pass


class WrongSignature(CalculusError):
    pass
