"""Exception hierarchy shared by every module in the package."""


class LinoepError(Exception):
    """Base class for all errors raised by this package."""


class InputError(LinoepError, ValueError):
    """Bad input: wrong shape, non-finite entries, dependent vectors."""


class DimensionMismatch(InputError):
    pass


class EmptySet(InputError):
    pass


class NotLinearlyIndependent(InputError):
    pass


class TooManyPermutations(InputError):
    pass


class DegenerateTailSum(LinoepError, ArithmeticError):
    """A projection denominator collapsed to (numerical) zero."""


class GenerationFailed(LinoepError, RuntimeError):
    pass
