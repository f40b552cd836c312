"""Exception types shared across the package."""


class GmflabError(Exception):
    """Base class for all library errors."""


class InvalidPermutation(GmflabError):
    pass


class GroupTooLarge(GmflabError):
    pass


class NotCyclic(GmflabError):
    pass


class NotAHomomorphism(GmflabError):
    """Raised with the offending pair of group elements attached."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotUnitModulus(GmflabError):
    pass


class DimensionMismatch(GmflabError):
    pass


class DegreeTooLarge(GmflabError):
    pass


class BlockCountMismatch(GmflabError):
    pass


class NotHermitian(GmflabError):
    pass


class NotPsd(GmflabError):
    pass


class ResultTooLarge(GmflabError):
    pass


class NegativeEntry(GmflabError):
    pass


class BadLevels(GmflabError):
    pass


class NumericalFailure(GmflabError):
    """Base for failures that indicate numerical pathology, not bad usage."""


class NoConvergence(NumericalFailure):
    pass


class ResidueBreach(NumericalFailure):
    """Imaginary residue of a matrix-function value exceeded its bound."""


class ReproductionFailed(GmflabError):
    """A built-in reference computation did not match its expected outcome."""

    def __init__(self, message, expected=None, actual=None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual
