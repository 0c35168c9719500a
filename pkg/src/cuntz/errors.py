"""Exception hierarchy shared by every module of the package."""


class CuError(Exception):
    """Base class for all errors raised by this package."""


class ElementNotInSemigroup(CuError, ValueError):
    pass


class KindMismatch(CuError, ValueError):
    pass


class NotIncreasing(CuError, ValueError):
    def __init__(self, index, lower, upper):
        super().__init__(f"sequence decreases at index {index}: {lower!r} is not <= {upper!r}")
        self.index = index
        self.lower = lower
        self.upper = upper


class StageMismatch(CuError, ValueError):
    pass


class InvalidForSupernatural(CuError, ValueError):
    pass


class NotASubsemigroup(CuError, ValueError):
    pass


class NotLowerSemicontinuous(CuError, ValueError):
    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


class BadBreakpoints(CuError, ValueError):
    pass


class PointNotInSpace(CuError, ValueError):
    pass


class SpaceMismatch(CuError, ValueError):
    pass


class NotClosedSubcomplex(CuError, ValueError):
    pass


class GlueOrderViolation(CuError, ValueError):
    pass


class NotOpen(CuError, ValueError):
    pass


class PreconditionViolated(CuError, ValueError):
    pass


class MultiplicityExceeded(CuError, ValueError):
    pass


class PhiNotOrdered(CuError, ValueError):
    pass


class MapNotCellwiseAffine(CuError, ValueError):
    pass


class ConstraintViolated(ElementNotInSemigroup):
    def __init__(self, message, left_base=None, right_base=None):
        super().__init__(message)
        self.left_base = left_base
        self.right_base = right_base


class DescriptorMismatch(CuError, ValueError):
    pass


class CannotMatchBase(CuError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidSpec(CuError, ValueError):
    pass


class ParseError(CuError, ValueError):
    def __init__(self, message, source=None, line=None):
        where = ""
        if source is not None:
            where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.source = source
        self.line = line


class NotPresentable(CuError, ValueError):
    pass
