"""Exception hierarchy shared by every module.

Everything algebraic raises a subclass of :class:`AlgebraError`, so callers
(and the CLI) can distinguish "the verification failed" from "the inputs were
malformed" with a single except clause.
"""


class AlgebraError(Exception):
    """Base class for all structured errors raised by this package."""


class FieldMismatch(AlgebraError):
    """Two elements (or polynomials) from different coefficient fields."""


class DivisionByZero(AlgebraError):
    """Division or inversion of a zero field element."""


class BadFieldSpec(AlgebraError):
    """Rejected field description (composite modulus, reducible or oversized
    minimal polynomial, ...)."""


class VarTableMismatch(AlgebraError):
    """Operands built over incompatible variable tables."""


class NegativePowerOfNonMonomial(AlgebraError):
    """Raising a polynomial with more than one term to a negative power."""


class NotDivisible(AlgebraError):
    """divide_exact: the divisor does not divide the dividend."""


class NonInvertibleImageForLaurentVariable(AlgebraError):
    """substitute: a variable occurring with a negative exponent was assigned
    an image that is not a single invertible term."""


class NotInAmbientRing(AlgebraError):
    """A congruence operand lies outside the declared ambient ring."""


class UnexpectedVariable(AlgebraError):
    """A polynomial involves a variable the operation does not allow."""


class NegativeExponentAtZero(AlgebraError):
    """set_vars_to_zero hit a variable occurring with a negative exponent."""


class ExprSyntaxError(AlgebraError):
    """Expression parse error; carries the 0-based offset in ``position``."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariable(ExprSyntaxError):
    """Expression references a name outside the variable table."""


class NegativeExponentNotAllowed(ExprSyntaxError):
    """Negative exponent on a variable the table does not mark as Laurent."""


class InvalidGenerator(AlgebraError):
    """An elementary map generator violates its shape invariants."""


class CongruenceFailed(AlgebraError):
    """A required congruence (mod a^m style) does not hold."""


class JacobianNotUnit(AlgebraError):
    """Certificate normalization: Jacobian is not a unit of the expected
    Laurent subring."""


class MembershipError(AlgebraError):
    """A map component lies outside the required ring; carries the component
    name and one offending term."""

    def __init__(self, message, component=None, term=None):
        super().__init__(message)
        self.component = component
        self.term = term


class ShapeError(AlgebraError):
    """A composite map does not have the required shape (e.g. not
    (x, y + f(x)))."""


class PreconditionViolated(AlgebraError):
    """Operation preconditions not met (degree bounds, characteristic, ...)."""


class CharTwoField(PreconditionViolated):
    """The construction requires 2 to be invertible in the field."""


class DegreeNotOne(AlgebraError):
    """The constant-chart slice P(0,0,x) is not of degree one."""


class NoPolynomialSInRange(AlgebraError):
    """Stable-variable search exhausted the exponent range."""
