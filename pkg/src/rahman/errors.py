class RahmanError(Exception):
    """Base class for every error raised by this package."""


class DegenerateParams(RahmanError, ZeroDivisionError):
    """A parameter combination hits a vanishing denominator."""


class IncompatibleParams(RahmanError):
    """Chain parameters and polynomial parameters are not linked as required."""


class InvalidSize(RahmanError, ValueError):
    pass


class OutOfSimplex(RahmanError, ValueError):
    pass


class RangeError(RahmanError, ValueError):
    pass


class InvalidState(RahmanError, ValueError):
    pass


class VanishingDenominator(RahmanError, ZeroDivisionError):
    pass


class SingularPolyMatrix(RahmanError, ArithmeticError):
    pass


class StochasticityViolation(RahmanError, AssertionError):
    """A kernel row failed to sum to one.  Always an implementation bug."""


class GaugeUnsolvable(RahmanError, ArithmeticError):
    pass


class InsufficientSamples(RahmanError):
    pass
