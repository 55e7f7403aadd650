"""Exception hierarchy.

Every error raised on purpose by the library derives from AlgebraError so the
CLI can map it to a usage/input exit code.
"""


class AlgebraError(Exception):
    pass


class DescriptorError(AlgebraError, ValueError):
    pass


class NonPrimeModulus(DescriptorError):
    pass


class NonMonicModulus(DescriptorError):
    pass


class ZeroLocalization(DescriptorError):
    pass


class NotInvertible(AlgebraError, ArithmeticError):
    pass


class UnsupportedRing(AlgebraError):
    pass


class UnsupportedBase(UnsupportedRing):
    pass


class NotLocal(AlgebraError):
    pass


class NonMonicDivisor(AlgebraError, ArithmeticError):
    pass


class NotFiniteField(AlgebraError):
    pass


class NonMonic(AlgebraError):
    pass


class CoefficientNotInBase(AlgebraError):
    """A value that must be a scalar of the base ring is not; indicates a bug."""


class RankCapExceeded(AlgebraError):
    pass


class NotSimpleRoot(AlgebraError):
    pass


class NoResidualRoot(AlgebraError):
    pass


class NotUnramifiable(AlgebraError):
    pass


class NotResiduallyIdempotent(AlgebraError):
    pass


class NotCoprime(AlgebraError):
    pass


class ResidueMismatch(AlgebraError):
    pass


class BaseRingMismatch(AlgebraError):
    pass


class NotAzumaya(AlgebraError):
    pass


class NotAutomorphism(AlgebraError):
    pass


class RandomnessExhausted(AlgebraError):
    pass


class UnsupportedFamily(AlgebraError):
    pass


class InvalidAlgebra(AlgebraError):
    pass
