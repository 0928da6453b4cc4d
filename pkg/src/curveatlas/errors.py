"""Exception hierarchy shared by every module."""


class CurveAtlasError(Exception):
    """Base class for all library errors."""


class NotPrime(CurveAtlasError, ValueError):
    pass


class CapExceeded(CurveAtlasError):
    pass


class BudgetExceeded(CurveAtlasError):
    pass


class DescriptorMismatch(CurveAtlasError, TypeError):
    pass


class DivisionByZero(CurveAtlasError, ZeroDivisionError):
    pass


class ZeroLeadingCoefficient(CurveAtlasError, ValueError):
    pass


class RootNotFound(CurveAtlasError, RuntimeError):
    """Raised only on internal bugs: valid extensions always contain the roots."""


class DegreeViolation(CurveAtlasError, ValueError):
    pass


class SingularModel(CurveAtlasError, ValueError):
    pass


class InvariantViolation(CurveAtlasError, AssertionError):
    pass


class NonIntegralCoefficient(CurveAtlasError, ArithmeticError):
    pass


class NotWeil(CurveAtlasError, ArithmeticError):
    pass


class NonIntegralResult(CurveAtlasError, ArithmeticError):
    pass


class NegativeResult(CurveAtlasError, ArithmeticError):
    pass


class RefinementCapExceeded(CurveAtlasError, ArithmeticError):
    pass


class PolySyntaxError(CurveAtlasError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class UndeclaredVariable(CurveAtlasError, ValueError):
    pass


class InhomogeneousForm(CurveAtlasError, ValueError):
    pass


class ParseError(CurveAtlasError, ValueError):
    pass


class SchemaError(CurveAtlasError, ValueError):
    pass


class PropertyFailed(CurveAtlasError, AssertionError):
    def __init__(self, prop, computed):
        self.property = prop
        self.computed = computed
        super().__init__(f"claim {prop!r} failed: computed {computed!r}")
