"""Exact Gaussian rationals ``(a + b*i) / d`` with integer ``a, b`` and ``d > 0``."""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class GaussianRational:
    """Element of Q(i), kept in lowest terms.

    Stored as integers ``a``, ``b``, ``d`` with ``d > 0`` and
    ``gcd(a, b, d) == 1``; the value is ``(a + b*i) / d``.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        self._set(a, b, d)

    def _set(self, a, b, d):
        if d != 1:
            g = gcd(gcd(a, b), d)
            if g != 1:
                a //= g
                b //= g
                d //= g
        self.a = a
        self.b = b
        self.d = d

    @classmethod
    def _raw(cls, a, b, d):
        obj = cls.__new__(cls)
        obj._set(a, b, d)
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, int):
            return cls._raw(value, 0, 1)
        if isinstance(value, Fraction):
            return cls._raw(value.numerator, 0, value.denominator)
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, float):
            return cls(Fraction(value))
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianRational")

    # -- accessors -------------------------------------------------------
    @property
    def real(self) -> Fraction:
        return Fraction(self.a, self.d)

    @property
    def imag(self) -> Fraction:
        return Fraction(self.b, self.d)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_one(self) -> bool:
        return self.a == 1 and self.b == 0 and self.d == 1

    def is_real(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.a, -self.b, self.d)

    def __complex__(self) -> complex:
        return complex(self.a / self.d, self.b / self.d)

    def mod(self, p: int, sqrt_minus_one: int) -> int:
        """Image in F_p under ``i -> sqrt_minus_one``; ``d`` must be a unit mod p."""
        return (self.a + self.b * sqrt_minus_one) * pow(self.d, -1, p) % p

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        if self.d == other.d:
            return GaussianRational._raw(self.a + other.a, self.b + other.b, self.d)
        return GaussianRational._raw(
            self.a * other.d + other.a * self.d,
            self.b * other.d + other.b * self.d,
            self.d * other.d,
        )

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self.a, -self.b, self.d)

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, e = self.a, self.b, other.a, other.b
        if b == 0 and e == 0:
            return GaussianRational._raw(a * c, 0, self.d * other.d)
        return GaussianRational._raw(a * c - b * e, a * e + b * c, self.d * other.d)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        n = self.a * self.a + self.b * self.b
        # d / (a + bi) = d (a - bi) / (a^2 + b^2)
        if n < 0:
            raise AssertionError
        return GaussianRational._raw(self.d * self.a, -self.d * self.b, n)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.a == other.a and self.b == other.b and self.d == other.d
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self == other

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.d))
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        re, im = self.real, self.imag
        if im == 0:
            return _fmt_fraction(re)
        im_part = "i" if im == 1 else "-i" if im == -1 else f"{_fmt_fraction(im)}*i"
        if re == 0:
            return im_part
        if im < 0:
            mag = -im
            body = "i" if mag == 1 else f"{_fmt_fraction(mag)}*i"
            return f"{_fmt_fraction(re)} - {body}"
        return f"{_fmt_fraction(re)} + {im_part}"


def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


ZERO = GaussianRational._raw(0, 0, 1)
ONE = GaussianRational._raw(1, 0, 1)
I = GaussianRational._raw(0, 1, 1)
