"""
Exceptions Module

Error types raised by the classifier, the bootstrap engines and the numerical suite.
Every message names the violated precondition and, where one exists, the citation
tag of the result whose hypothesis is not met.
"""


class VerificationError(Exception):
    """Base class for all errors raised by the toolkit."""


class ExponentOutOfRange(VerificationError, ValueError):
    """An exponent lies outside the range where a criterion or formula is meaningful."""


class CriticalExponent(VerificationError, ArithmeticError):
    """The Sobolev lift was asked to cross the critical space exponent q = 3."""


class IterationExhausted(VerificationError):
    """A bootstrap step produced a time exponent below 1."""


class TopologyObstruction(VerificationError):
    """The curl-to-gradient transfer needs a domain with vanishing first Betti number."""


class HypothesisTooWeak(VerificationError):
    """The scaling level of the hypothesis on lambda is not below 1."""


class UndefinedRatio(VerificationError, ZeroDivisionError):
    """A normalized residual or ratio has a vanishing denominator."""


class InvalidConfig(VerificationError, ValueError):
    """A mollifier, time grid or simulation configuration fails validation."""


class DivergedSimulation(VerificationError, FloatingPointError):
    """The spectral time stepper produced non-finite values."""


class RationalParseError(VerificationError, ValueError):
    """A rational literal could not be parsed exactly."""
