"""Exception hierarchy shared by all syzygy modules."""


class SyzygyError(Exception):
    """Base class for every error raised deliberately by this package."""


class CompositeModulus(SyzygyError, ValueError):
    pass


class ModulusTooLarge(SyzygyError, ValueError):
    pass


class DivisionByZero(SyzygyError, ZeroDivisionError):
    pass


class InvalidForm(SyzygyError, ValueError):
    pass


class DegreeMismatch(SyzygyError, ValueError):
    pass


class DimensionMismatch(SyzygyError, ValueError):
    pass


class IndexOutOfRange(SyzygyError, IndexError):
    pass


class BadK(SyzygyError, ValueError):
    pass


class CharDividesDegree(SyzygyError, ValueError):
    pass


class ResourceCap(SyzygyError):
    """The estimated working set of a computation exceeds the memory budget."""


class MalformedMatrixFile(SyzygyError, ValueError):
    pass


class IdentityFailure(SyzygyError):
    """A closed-form identity of the construction did not hold."""
