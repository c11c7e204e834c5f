"""Exact scalars for root-system computations.

Two base fields occur.  Crystallographic systems live over the rationals,
represented by ``int`` and :class:`fractions.Fraction`.  The H-types need
the real quadratic field Q(sqrt 5), represented by :class:`Q5` on the basis
{1, sqrt 5}.  Python ints are accepted by both as integer literals; mixing a
``Fraction`` with a ``Q5`` is rejected so that one root system never silently
combines scalars from different fields.

:class:`GoldenInt` is the ring of integers Z[phi] of Q(sqrt 5) on the basis
{1, phi}; it is only used for ideal (gcd) computations.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Union

Rational = Union[int, Fraction]
Scalar = Union[int, Fraction, "Q5"]


class MixedFieldError(TypeError):
    """Raised when Q and Q(sqrt 5) scalars are combined."""


def _sign_rational(x: Rational) -> int:
    return (x > 0) - (x < 0)


def _normalize(x: Rational) -> Rational:
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


@total_ordering
class Q5:
    """The number ``a + b*sqrt(5)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b", "_hash")

    def __init__(self, a: Rational = 0, b: Rational = 0) -> None:
        if not isinstance(a, (int, Fraction)) or not isinstance(b, (int, Fraction)):
            raise TypeError(f"Q5 coordinates must be rational, got {a!r}, {b!r}")
        self.a = _normalize(a)
        self.b = _normalize(b)
        self._hash = None

    @staticmethod
    def _coerce(other: object) -> "Q5":
        if isinstance(other, Q5):
            return other
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, int):
            return Q5(other, 0)
        if isinstance(other, Fraction):
            raise MixedFieldError("cannot combine Q(sqrt5) scalar with a Fraction")
        return NotImplemented

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Q5(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Q5(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Q5(o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return Q5(self.a * other, self.b * other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Q5(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __neg__(self) -> "Q5":
        return Q5(-self.a, -self.b)

    def __pos__(self) -> "Q5":
        return self

    def __abs__(self) -> "Q5":
        return -self if self.sign() < 0 else self

    def conjugate(self) -> "Q5":
        return Q5(self.a, -self.b)

    def norm(self) -> Rational:
        """Field norm ``a^2 - 5 b^2``."""
        return _normalize(self.a * self.a - 5 * self.b * self.b)

    def inverse(self) -> "Q5":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt5)")
        return Q5(Fraction(self.a) / n, Fraction(-self.b) / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.b == 0:
            if o.a == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt5)")
            return Q5(Fraction(self.a) / o.a, Fraction(self.b) / o.a)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    # -- order ------------------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of the real number ``a + b sqrt5``."""
        sa, sb = _sign_rational(self.a), _sign_rational(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the term with the larger square wins
        lhs, rhs = self.a * self.a, 5 * self.b * self.b
        if lhs > rhs:
            return sa
        if lhs < rhs:
            return sb
        return 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Q5):
            return self.a == other.a and self.b == other.b
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __lt__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() < 0

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.a) if self.b == 0 else hash((self.a, self.b))
        return self._hash

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 5**0.5

    def __repr__(self) -> str:
        return f"Q5({self.a!s}, {self.b!s})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*r5"
        op = "+" if self.b > 0 else "-"
        return f"{self.a}{op}{abs(self.b)}*r5"


def sign(x: Scalar) -> int:
    if isinstance(x, Q5):
        return x.sign()
    return _sign_rational(x)


def exact_div(x: Scalar, y: Scalar) -> Scalar:
    """Field division that never produces a float."""
    if isinstance(x, int) and isinstance(y, int):
        if y == 0:
            raise ZeroDivisionError("division by zero")
        return _normalize(Fraction(x, y))
    if isinstance(y, int) and isinstance(x, Fraction):
        return _normalize(x / y)
    return x / y


def ring_div(x: Scalar, y: Scalar) -> Scalar:
    """Division known to be exact inside the ring (Bareiss steps)."""
    if isinstance(x, int) and isinstance(y, int):
        q, r = divmod(x, y)
        if r:
            raise ArithmeticError(f"{x} is not divisible by {y}")
        return q
    return exact_div(x, y)


def field_of(x: Scalar) -> str:
    return "q5" if isinstance(x, Q5) else "q"


# -- JSON --------------------------------------------------------------------

def _rat_str(x: Rational) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def to_json(x: Scalar) -> dict:
    if isinstance(x, Q5):
        return {"q5": [_rat_str(x.a), _rat_str(x.b)]}
    return {"q": _rat_str(x)}


def from_json(obj: dict) -> Scalar:
    if "q5" in obj:
        a, b = obj["q5"]
        return Q5(_normalize(Fraction(a)), _normalize(Fraction(b)))
    return _normalize(Fraction(obj["q"]))


# -- Z[phi] and its gcd -------------------------------------------------------

class GoldenInt:
    """The algebraic integer ``a + b*phi`` with ``phi = (1 + sqrt5)/2``."""

    __slots__ = ("a", "b")

    def __init__(self, a: int = 0, b: int = 0) -> None:
        self.a = int(a)
        self.b = int(b)

    @classmethod
    def from_q5(cls, x: Scalar) -> "GoldenInt":
        # a + b phi = (a + b/2) + (b/2) sqrt5
        if not isinstance(x, Q5):
            x = Q5(x, 0)
        b = 2 * Fraction(x.b)
        a = Fraction(x.a) - Fraction(x.b)
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError(f"{x} is not an algebraic integer of Q(sqrt5)")
        return cls(a.numerator, b.numerator)

    def to_q5(self) -> Q5:
        return Q5(self.a + Fraction(self.b, 2), Fraction(self.b, 2))

    def norm(self) -> int:
        return self.a * self.a + self.a * self.b - self.b * self.b

    def __add__(self, o: "GoldenInt") -> "GoldenInt":
        return GoldenInt(self.a + o.a, self.b + o.b)

    def __sub__(self, o: "GoldenInt") -> "GoldenInt":
        return GoldenInt(self.a - o.a, self.b - o.b)

    def __mul__(self, o: "GoldenInt") -> "GoldenInt":
        # phi^2 = phi + 1
        return GoldenInt(self.a * o.a + self.b * o.b, self.a * o.b + self.b * o.a + self.b * o.b)

    def __neg__(self) -> "GoldenInt":
        return GoldenInt(-self.a, -self.b)

    def __eq__(self, o) -> bool:
        return isinstance(o, GoldenInt) and self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __repr__(self) -> str:
        return f"GoldenInt({self.a}, {self.b})"

    def conjugate(self) -> "GoldenInt":
        # phi -> 1 - phi
        return GoldenInt(self.a + self.b, -self.b)

    def divmod(self, o: "GoldenInt") -> tuple["GoldenInt", "GoldenInt"]:
        """Euclidean division with ``|N(r)| < |N(o)|``."""
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[phi]")
        num = self * o.conjugate()
        q = GoldenInt(_round_div(num.a, n), _round_div(num.b, n))
        return q, self - q * o

    def divides(self, o: "GoldenInt") -> bool:
        if not self:
            return not o
        return not o.divmod(self)[1]

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1


def _round_div(p: int, q: int) -> int:
    if q < 0:
        p, q = -p, -q
    return (2 * p + q) // (2 * q)


def ring_gcd(x, y):
    """Generator of the ideal (x, y) in Z or Z[phi], up to a unit."""
    if isinstance(x, GoldenInt) or isinstance(y, GoldenInt):
        x = x if isinstance(x, GoldenInt) else GoldenInt(x, 0)
        y = y if isinstance(y, GoldenInt) else GoldenInt(y, 0)
        while y:
            x, y = y, x.divmod(y)[1]
        return x
    while y:
        x, y = y, x % y
    return abs(x)


def content(values) -> object:
    """gcd of a sequence of ring integers."""
    g = 0
    for v in values:
        g = ring_gcd(g, v)
    return g
