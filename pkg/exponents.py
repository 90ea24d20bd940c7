"""
Exponents Module

Exact arithmetic on rationals extended by +inf, and the calculus of Bochner
exponents (p, q) for L^p(0,T;L^q): Holder combination, Sobolev and Morrey
lifting, embeddings on a finite time interval and bounded domain, and the
parabolic scaling level 2/p + 3/q.

No floating point is used here. Every value is backed by ``fractions.Fraction``.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from exceptions import CriticalExponent, ExponentOutOfRange, RationalParseError

_LITERAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_INF_WORDS = {"inf", "+inf", "infinity", "+infinity", "∞"}


@total_ordering
class ExtRational:
    """A rational number or +inf.

    Finite values wrap a ``Fraction`` (lowest terms, positive denominator).
    ``None`` as the internal value stands for +inf. Operations whose result
    would be -inf or indeterminate raise ``ArithmeticError``.
    """

    __slots__ = ("_value",)

    def __init__(self, value=0, denominator=None):
        if isinstance(value, ExtRational):
            if denominator is not None:
                raise TypeError("denominator not allowed with an ExtRational value")
            self._value = value._value
            return
        if isinstance(value, str) and denominator is None:
            self._value = parse_rational(value)._value
            return
        if isinstance(value, (float, complex)):
            raise TypeError("floats are not accepted; pass an int, Fraction or 'a/b' string")
        if denominator is None:
            self._value = Fraction(value)
        else:
            if denominator == 0:
                raise ZeroDivisionError("zero denominator in rational literal")
            self._value = Fraction(value, denominator)

    @classmethod
    def infinity(cls):
        obj = cls.__new__(cls)
        obj._value = None
        return obj

    # Queries

    @property
    def is_infinite(self):
        return self._value is None

    @property
    def is_finite(self):
        return self._value is not None

    @property
    def fraction(self):
        """The finite value as a Fraction."""
        if self._value is None:
            raise ArithmeticError("+inf has no finite value")
        return self._value

    @property
    def numerator(self):
        return self.fraction.numerator

    @property
    def denominator(self):
        return self.fraction.denominator

    def reciprocal(self):
        """1/x with 1/inf = 0 and 1/0 = inf."""
        if self._value is None:
            return ExtRational(0)
        if self._value == 0:
            return INF
        return ExtRational(1 / self._value)

    def ceil(self):
        if self._value is None:
            raise ArithmeticError("ceiling of +inf")
        return math.ceil(self._value)

    def floor(self):
        if self._value is None:
            raise ArithmeticError("floor of +inf")
        return math.floor(self._value)

    def to_float(self):
        return math.inf if self._value is None else float(self._value)

    # Arithmetic

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._value is None or other._value is None:
            return INF
        return ExtRational(self._value + other._value)

    __radd__ = __add__

    def __neg__(self):
        if self._value is None:
            raise ArithmeticError("-inf is not representable")
        return ExtRational(-self._value)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other._value is None:
            raise ArithmeticError("subtracting +inf is not representable")
        if self._value is None:
            return INF
        return ExtRational(self._value - other._value)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._value is None or other._value is None:
            finite = other if self._value is None else self
            if finite._value is None or finite._value > 0:
                return INF
            raise ArithmeticError("inf times a non-positive value is undefined")
        return ExtRational(self._value * other._value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._value is None and other._value is None:
            raise ArithmeticError("inf / inf is undefined")
        if other._value == 0 and self._value is not None and self._value <= 0:
            raise ArithmeticError("non-positive value divided by zero")
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    # Comparison and hashing

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._value == other._value

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._value is None:
            return False
        if other._value is None:
            return True
        return self._value < other._value

    def __hash__(self):
        return hash(math.inf) if self._value is None else hash(self._value)

    def __bool__(self):
        return self._value is None or self._value != 0

    def __str__(self):
        return format_rational(self)

    def __repr__(self):
        return f"ExtRational('{format_rational(self)}')"


def _coerce(value):
    if isinstance(value, ExtRational):
        return value
    if isinstance(value, (int, Fraction)):
        return ExtRational(value)
    return NotImplemented


INF = ExtRational.infinity()
ZERO = ExtRational(0)
ONE = ExtRational(1)


def Q(value, denominator=None):
    """Shorthand constructor: ``Q(9, 5)``, ``Q("9/5")``, ``Q("inf")``."""
    if isinstance(value, ExtRational) and denominator is None:
        return value
    return ExtRational(value, denominator)


def parse_rational(text):
    """Parse the literal syntax "a/b", "a" or "inf".

    Decimals are rejected.

    Raises:
        RationalParseError: if the text is not a valid literal
    """
    if not isinstance(text, str):
        raise RationalParseError(f"expected a string literal, got {type(text).__name__}")
    if text.strip().lower() in _INF_WORDS:
        return ExtRational.infinity()
    match = _LITERAL.match(text)
    if not match:
        raise RationalParseError(
            f"invalid rational literal {text!r}; use 'a/b', an integer or 'inf'"
        )
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise RationalParseError(f"zero denominator in rational literal {text!r}")
    return ExtRational(numerator, denominator)


def format_rational(x):
    """Render as "inf", "a" or "a/b"."""
    x = Q(x)
    if x.is_infinite:
        return "inf"
    f = x.fraction
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class BochnerSpec:
    """Exponent pair of L^p(0,T;L^q(Omega)): ``time_exp`` = p, ``space_exp`` = q."""

    time_exp: ExtRational
    space_exp: ExtRational

    def __post_init__(self):
        object.__setattr__(self, "time_exp", Q(self.time_exp))
        object.__setattr__(self, "space_exp", Q(self.space_exp))

    @classmethod
    def of(cls, p, q):
        return cls(Q(p), Q(q))

    def is_admissible(self):
        """Both exponents are at least 1."""
        return self.time_exp >= 1 and self.space_exp >= 1

    def __str__(self):
        return f"({self.time_exp}, {self.space_exp})"


ENERGY_CLASS = BochnerSpec(INF, Q(2))
BOUNDED = BochnerSpec(INF, INF)


def holder_combine(a, b):
    """Exponents of a product f*g with f in a and g in b.

    Reciprocals add in both slots. Results below 1 are returned as is;
    callers check admissibility.
    """
    p = (a.time_exp.reciprocal() + b.time_exp.reciprocal()).reciprocal()
    q = (a.space_exp.reciprocal() + b.space_exp.reciprocal()).reciprocal()
    return BochnerSpec(p, q)


def morrey_lift(q):
    """W^{1,q} into L^inf for q > 3."""
    q = Q(q)
    if not q > 3:
        raise ExponentOutOfRange(f"Morrey embedding needs q > 3, got q = {q}")
    return INF


def sobolev_lift(q):
    """Space exponent of u given grad u in L^q: 3q/(3-q) below 3, +inf above.

    Raises:
        ExponentOutOfRange: if q < 1
        CriticalExponent: if q == 3
    """
    q = Q(q)
    if q < 1:
        raise ExponentOutOfRange(f"Sobolev lift needs q >= 1, got q = {q}")
    if q == 3:
        raise CriticalExponent("Sobolev lift at the critical exponent q = 3 is not taken")
    if q > 3:
        return morrey_lift(q)
    return 3 * q / (3 - q)


def embeds(a, b):
    """True iff L^{p_a}(L^{q_a}) embeds into L^{p_b}(L^{q_b}) on finite T and bounded Omega."""
    return a.time_exp >= b.time_exp and a.space_exp >= b.space_exp


def scaling_level(s):
    """2/p + 3/q."""
    return 2 * s.time_exp.reciprocal() + 3 * s.space_exp.reciprocal()
