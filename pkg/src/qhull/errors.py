"""Exception types shared across the package."""


class AlgebraError(Exception):
    """Base class for structural validation failures."""


class NotAGroup(AlgebraError):
    pass


class NotAssociative(AlgebraError):
    pass


class NotDistributive(AlgebraError):
    pass


class NoUnity(AlgebraError):
    pass


class NotLinear(AlgebraError):
    pass


class NotUnital(AlgebraError):
    pass


class RingMismatch(AlgebraError):
    pass


class NotASubmodule(AlgebraError):
    pass


class NotTwoSided(AlgebraError):
    pass


class ShapeMismatch(AlgebraError):
    pass


class CapExceeded(Exception):
    """A configured size bound was hit before the computation finished."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: {size} exceeds limit {limit}")
        self.what = what
        self.size = size
        self.limit = limit


class PreconditionFailed(Exception):
    pass


class InternalInconsistency(AssertionError):
    """A result that the underlying theory rules out; always a bug."""


class NonUnique(InternalInconsistency):
    pass


class NotFound(InternalInconsistency):
    pass


class UnknownCheck(KeyError):
    pass
