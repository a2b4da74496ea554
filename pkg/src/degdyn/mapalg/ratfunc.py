"""Quotients of MultiPoly, used for affine map components and Jacobians."""

from __future__ import annotations

from .gaussian import GaussianRational
from .poly import MultiPoly, poly_gcd


class RationalFunction:
    """``num / den`` with ``den`` not identically zero.

    Arithmetic does not reduce by the gcd; call :meth:`reduced` for that.
    A constant denominator is always folded into the numerator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.one(num.nvars)
        if den.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        num._check(den)
        if den.is_constant():
            c = den.constant_term()
            if not c.is_one():
                num = num.scale(c.inverse())
            den = MultiPoly.one(num.nvars)
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def constant(cls, nvars: int, c) -> "RationalFunction":
        return cls(MultiPoly.constant(nvars, c))

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def reduced(self) -> "RationalFunction":
        if self.den.is_constant() or self.num.is_zero():
            if self.num.is_zero():
                return RationalFunction(MultiPoly.zero(self.nvars))
            return self
        g = poly_gcd(self.num, self.den)
        num, den = (self.num, self.den) if g.is_constant() else (
            self.num.divexact(g), self.den.divexact(g))
        lc = den.leading_coefficient()
        if not lc.is_one():
            inv = lc.inverse()
            num, den = num.scale(inv), den.scale(inv)
        return RationalFunction(num, den)

    def _lift(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction(other)
        return RationalFunction.constant(self.nvars, GaussianRational.coerce(other))

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            other = self._lift(other)
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        r = self.reduced()
        return hash((r.num, r.den))

    def derivative(self, i: int) -> "RationalFunction":
        if self.den.is_constant():
            return RationalFunction(self.num.derivative(i))
        return RationalFunction(
            self.num.derivative(i) * self.den - self.num * self.den.derivative(i),
            self.den * self.den,
        )

    def substitute(self, values: list["RationalFunction"]) -> "RationalFunction":
        """Composition with rational functions substituted for the variables."""
        if all(v.is_polynomial() for v in values):
            polys = [v.num for v in values]
            return RationalFunction(self.num.substitute(polys), self.den.substitute(polys))
        return _subst(self.num, values) / _subst(self.den, values)

    def evaluate(self, point):
        return self.num.evaluate(point) / self.den.evaluate(point)

    def __repr__(self):
        from .parse import format_ratfunc

        return f"RationalFunction({format_ratfunc(self, None)!r})"


def _subst(p: MultiPoly, values: list[RationalFunction]) -> RationalFunction:
    m = values[0].nvars
    total = RationalFunction(MultiPoly.zero(m))
    for exps, c in p.items():
        term = RationalFunction.constant(m, c)
        for v, e in zip(values, exps):
            if e:
                term = term * v ** e
        total = total + term
    return total
