"""Sparse multivariate polynomials over the Gaussian rationals.

Exponent vectors are packed into one Python integer (``EXP_BITS`` bits per
variable) so that monomial multiplication is a single integer addition.
"""

from __future__ import annotations

import heapq
import random
from typing import Iterable, Mapping, Sequence

from .gaussian import ONE, ZERO, GaussianRational

EXP_BITS = 20
EXP_MASK = (1 << EXP_BITS) - 1
EXPONENT_GUARD = 1 << 16


class ExponentOverflowError(ArithmeticError):
    """An exponent exceeded ``EXPONENT_GUARD`` in some variable."""


def pack(exps: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0:
            raise ValueError("negative exponent")
        if e > EXPONENT_GUARD:
            raise ExponentOverflowError(f"exponent {e} exceeds guard {EXPONENT_GUARD}")
        key |= e << (EXP_BITS * i)
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (EXP_BITS * i)) & EXP_MASK for i in range(nvars))


def _coerce(c) -> GaussianRational:
    return GaussianRational.coerce(c)


class MultiPoly:
    """Immutable polynomial in ``nvars`` variables.

    Terms live in a dict ``packed exponent -> GaussianRational`` with no
    zero coefficients.  Public constructors take exponent tuples.
    """

    __slots__ = ("nvars", "_t", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        self.nvars = nvars
        self._hash = None
        t = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != nvars:
                    raise ValueError(f"exponent vector {exps} does not have {nvars} entries")
                c = _coerce(c)
                if c.is_zero():
                    continue
                k = pack(exps)
                prev = t.get(k)
                if prev is None:
                    t[k] = c
                else:
                    s = prev + c
                    if s.is_zero():
                        del t[k]
                    else:
                        t[k] = s
        self._t = t

    @classmethod
    def _from_packed(cls, nvars: int, t: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._t = t
        obj._hash = None
        return obj

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._from_packed(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        c = _coerce(c)
        return cls._from_packed(nvars, {} if c.is_zero() else {0: c})

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls._from_packed(nvars, {0: ONE})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise IndexError(i)
        return cls._from_packed(nvars, {1 << (EXP_BITS * i): ONE})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "MultiPoly":
        return cls(len(exps), {tuple(exps): c})

    # -- inspection --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_term(self) -> GaussianRational:
        return self._t.get(0, ZERO)

    def __len__(self) -> int:
        return len(self._t)

    def items(self) -> list[tuple[tuple[int, ...], GaussianRational]]:
        """Terms as ``(exponents, coefficient)`` in descending grlex order."""
        out = [(unpack(k, self.nvars), c) for k, c in self._t.items()]
        out.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return out

    def coefficient(self, exps: Sequence[int]) -> GaussianRational:
        return self._t.get(pack(exps), ZERO)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        if not self._t:
            return -1
        return max(self._total(k) for k in self._t)

    def _total(self, k: int) -> int:
        s = 0
        while k:
            s += k & EXP_MASK
            k >>= EXP_BITS
        return s

    def degree_in(self, i: int) -> int:
        if not self._t:
            return -1
        sh = EXP_BITS * i
        return max((k >> sh) & EXP_MASK for k in self._t)

    def min_degree_in(self, i: int) -> int:
        sh = EXP_BITS * i
        return min((k >> sh) & EXP_MASK for k in self._t) if self._t else 0

    def variables(self) -> list[int]:
        return [i for i in range(self.nvars) if self.degree_in(i) > 0]

    def is_homogeneous(self) -> bool:
        if not self._t:
            return True
        degs = {self._total(k) for k in self._t}
        return len(degs) == 1

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._from_packed(
            self.nvars, {k: c for k, c in self._t.items() if self._total(k) == d}
        )

    def leading(self) -> tuple[tuple[int, ...], GaussianRational]:
        """Leading term in graded lexicographic order."""
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        best = max(self._t, key=lambda k: (self._total(k), unpack(k, self.nvars)))
        return unpack(best, self.nvars), self._t[best]

    def leading_coefficient(self) -> GaussianRational:
        return self.leading()[1]

    def monic(self) -> "MultiPoly":
        if not self._t:
            return self
        lc = self.leading_coefficient()
        return self if lc.is_one() else self.scale(lc.inverse())

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other: "MultiPoly") -> None:
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        t = dict(self._t)
        for k, c in other._t.items():
            prev = t.get(k)
            if prev is None:
                t[k] = c
            else:
                s = prev + c
                if s.is_zero():
                    del t[k]
                else:
                    t[k] = s
        return MultiPoly._from_packed(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._from_packed(self.nvars, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = _coerce(c)
        if c.is_zero():
            return MultiPoly.zero(self.nvars)
        if c.is_one():
            return self
        return MultiPoly._from_packed(self.nvars, {k: v * c for k, v in self._t.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        if not self._t or not other._t:
            return MultiPoly.zero(self.nvars)
        self._guard_product(other)
        a, b = (self._t, other._t) if len(self._t) <= len(other._t) else (other._t, self._t)
        out: dict = {}
        get = out.get
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                k = k1 + k2
                prev = get(k)
                out[k] = c1 * c2 if prev is None else prev + c1 * c2
        return MultiPoly._from_packed(
            self.nvars, {k: c for k, c in out.items() if not c.is_zero()}
        )

    def __rmul__(self, other):
        return self.__mul__(other)

    def _guard_product(self, other: "MultiPoly") -> None:
        for i in range(self.nvars):
            if self.degree_in(i) + other.degree_in(i) > EXPONENT_GUARD:
                raise ExponentOverflowError(
                    f"exponent of variable {i} would exceed guard {EXPONENT_GUARD}"
                )

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        for i in range(self.nvars):
            if self.degree_in(i) * n > EXPONENT_GUARD:
                raise ExponentOverflowError(
                    f"exponent of variable {i} would exceed guard {EXPONENT_GUARD}"
                )
        result = MultiPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._t == other._t
        try:
            return self == MultiPoly.constant(self.nvars, other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._t.items())))
        return self._hash

    # -- division --------------------------------------------------------------
    def divexact(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient ``self / other``; raises ``ValueError`` if not exact."""
        q, r = self.divmod_grlex(other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def divmod_grlex(self, other: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if other.is_constant():
            return self.scale(other.constant_term().inverse()), MultiPoly.zero(self.nvars)
        lexp, lc = other.leading()
        lkey = pack(lexp)
        inv = lc.inverse()
        n = self.nvars
        rank = _order_key(n)
        rem = dict(self._t)
        heap = [-rank(k) for k in rem]
        heapq.heapify(heap)
        back = {rank(k): k for k in rem}
        quot: dict = {}
        out_rem: dict = {}
        other_items = list(other._t.items())
        while heap:
            rk = -heapq.heappop(heap)
            k = back[rk]
            c = rem.pop(k, None)
            if c is None:
                continue
            if _divides(lkey, k, n):
                qk = k - lkey
                qc = c * inv
                quot[qk] = quot[qk] + qc if qk in quot else qc
                for k2, c2 in other_items:
                    kk = qk + k2
                    if kk == k:
                        continue
                    prev = rem.get(kk)
                    if prev is None:
                        rem[kk] = -(qc * c2)
                        r2 = rank(kk)
                        back[r2] = kk
                        heapq.heappush(heap, -r2)
                    else:
                        v = prev - qc * c2
                        if v.is_zero():
                            del rem[kk]
                        else:
                            rem[kk] = v
            else:
                out_rem[k] = c
        return MultiPoly._from_packed(n, quot), MultiPoly._from_packed(n, out_rem)

    # -- calculus / evaluation -----------------------------------------------
    def derivative(self, i: int) -> "MultiPoly":
        sh = EXP_BITS * i
        unit = 1 << sh
        out = {}
        for k, c in self._t.items():
            e = (k >> sh) & EXP_MASK
            if e:
                out[k - unit] = c * e
        return MultiPoly._from_packed(self.nvars, out)

    def evaluate(self, point: Sequence):
        """Evaluate at ``point``; exact for Gaussian rationals, float for complex."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        numeric = any(isinstance(x, (float, complex)) for x in point)
        if numeric:
            pt = [complex(x) for x in point]
            total = 0j
            for k, c in self._t.items():
                v = complex(c)
                for i in range(self.nvars):
                    e = (k >> (EXP_BITS * i)) & EXP_MASK
                    if e:
                        v *= pt[i] ** e
                total += v
            return total
        pt = [_coerce(x) for x in point]
        total = ZERO
        for k, c in self._t.items():
            v = c
            for i in range(self.nvars):
                e = (k >> (EXP_BITS * i)) & EXP_MASK
                if e:
                    v = v * pt[i] ** e
            total = total + v
        return total

    def substitute(self, polys: Sequence["MultiPoly"]) -> "MultiPoly":
        """Composition ``self(polys[0], ..., polys[nvars-1])``."""
        if len(polys) != self.nvars:
            raise ValueError("need one polynomial per variable")
        m = polys[0].nvars
        if any(p.nvars != m for p in polys):
            raise ValueError("substituted polynomials must share a variable count")
        cache: list[dict[int, MultiPoly]] = [{0: MultiPoly.one(m), 1: p} for p in polys]

        def power(i: int, e: int) -> MultiPoly:
            c = cache[i]
            if e not in c:
                half = power(i, e // 2)
                c[e] = half * half if e % 2 == 0 else half * half * polys[i]
            return c[e]

        result = MultiPoly.zero(m)
        for k, c in self._t.items():
            term = MultiPoly.constant(m, c)
            for i in range(self.nvars):
                e = (k >> (EXP_BITS * i)) & EXP_MASK
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def extend(self, nvars: int, positions: Sequence[int] | None = None) -> "MultiPoly":
        """Embed into a ring with ``nvars`` variables (variable i -> positions[i])."""
        positions = list(positions) if positions is not None else list(range(self.nvars))
        out = {}
        for k, c in self._t.items():
            exps = unpack(k, self.nvars)
            new = [0] * nvars
            for i, e in enumerate(exps):
                new[positions[i]] += e
            out[pack(new)] = c
        return MultiPoly._from_packed(nvars, out)

    def homogenize(self, degree: int | None = None) -> "MultiPoly":
        """Append a homogenizing variable and lift to ``degree`` (default: total degree)."""
        d = self.degree() if degree is None else degree
        if d < self.degree():
            raise ValueError("target degree below total degree")
        n = self.nvars
        out = {}
        for k, c in self._t.items():
            out[k | (d - self._total(k)) << (EXP_BITS * n)] = c
        return MultiPoly._from_packed(n + 1, out)

    def specialize(self, i: int, value) -> "MultiPoly":
        """Set variable ``i`` to a constant; the variable count is unchanged."""
        value = _coerce(value)
        sh = EXP_BITS * i
        out: dict = {}
        for k, c in self._t.items():
            e = (k >> sh) & EXP_MASK
            kk = k & ~(EXP_MASK << sh)
            v = c * value ** e if e else c
            out[kk] = out[kk] + v if kk in out else v
        return MultiPoly._from_packed(self.nvars, {k: c for k, c in out.items() if not c.is_zero()})

    def coefficients_in(self, i: int) -> dict[int, "MultiPoly"]:
        """Split as ``sum_j coeff_j * x_i**j``; coefficients do not involve ``x_i``."""
        sh = EXP_BITS * i
        groups: dict[int, dict] = {}
        for k, c in self._t.items():
            e = (k >> sh) & EXP_MASK
            groups.setdefault(e, {})[k & ~(EXP_MASK << sh)] = c
        return {e: MultiPoly._from_packed(self.nvars, t) for e, t in groups.items()}

    def complex_terms(self) -> list[tuple[tuple[int, ...], complex]]:
        return [(unpack(k, self.nvars), complex(c)) for k, c in self._t.items()]

    def mod_terms(self, p: int, root: int) -> list[tuple[tuple[int, ...], int]]:
        """Terms with coefficients reduced into F_p (``i -> root``)."""
        return [(unpack(k, self.nvars), c.mod(p, root)) for k, c in self._t.items()]

    def __repr__(self):
        from .parse import format_poly

        names = default_names(self.nvars)
        return f"MultiPoly({format_poly(self, names)!r}, nvars={self.nvars})"


def _order_key(n: int):
    """Integer rank of a packed monomial in graded lexicographic order."""
    width = EXP_BITS + 1

    def rank(k: int) -> int:
        total = 0
        lex = 0
        for i in range(n):
            e = (k >> (EXP_BITS * i)) & EXP_MASK
            total += e
            lex = (lex << width) | e
        return (total << (width * n)) | lex

    return rank


def _divides(a: int, b: int, n: int) -> bool:
    for i in range(n):
        sh = EXP_BITS * i
        if (a >> sh) & EXP_MASK > (b >> sh) & EXP_MASK:
            return False
    return True


def default_names(n: int) -> list[str]:
    return [f"x{i}" for i in range(n)]


# ---------------------------------------------------------------------------
# gcd
# ---------------------------------------------------------------------------

# Primes p = 1 (mod 4), so that -1 has a square root in F_p.
_GCD_PRIMES = (2305843009213693921, 2305843009213693693, 2305843009213693669)


def _sqrt_minus_one(p: int) -> int:
    for a in range(2, 1000):
        r = pow(a, (p - 1) // 4, p)
        if r * r % p == p - 1:
            return r
    raise ArithmeticError(f"no square root of -1 mod {p}")


_ROOTS = {p: _sqrt_minus_one(p) for p in _GCD_PRIMES}


def _mod_image(poly: MultiPoly, var: int, point: Sequence[int], p: int) -> list[int]:
    """Univariate image in ``x_var`` over F_p, other variables set to ``point``."""
    root = _ROOTS[p]
    deg = poly.degree_in(var)
    coeffs = [0] * (deg + 1)
    n = poly.nvars
    for k, c in poly._t.items():
        v = c.mod(p, root)
        e_var = 0
        for i in range(n):
            e = (k >> (EXP_BITS * i)) & EXP_MASK
            if i == var:
                e_var = e
            elif e:
                v = v * pow(point[i], e, p) % p
        coeffs[e_var] = (coeffs[e_var] + v) % p
    return coeffs


def certainly_coprime(p: MultiPoly, q: MultiPoly, rng: random.Random | None = None) -> bool:
    """True only if ``p`` and ``q`` are proven coprime by a modular image test.

    For each variable present in both, the other variables are specialized
    at a random point of F_p at which the leading coefficient of ``p`` does
    not vanish; a trivial univariate gcd then rules out any common factor
    of positive degree in that variable.
    """
    import flint

    rng = rng or random.Random(0x5EED)
    shared = [i for i in range(p.nvars) if p.degree_in(i) > 0 and q.degree_in(i) > 0]
    prime = _GCD_PRIMES[0]
    for var in shared:
        ok = False
        for _ in range(4):
            point = [rng.randrange(1, prime) for _ in range(p.nvars)]
            a = _mod_image(p, var, point, prime)
            b = _mod_image(q, var, point, prime)
            if a[-1] == 0:
                continue
            g = flint.nmod_poly(a, prime).gcd(flint.nmod_poly(b, prime))
            if g.degree() == 0:
                ok = True
            break
        if not ok:
            return False
    return True


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor over Q(i), normalized to leading coefficient 1.

    ``gcd(p, 0) = p`` (made monic).  Uses content extraction and a recursive
    subresultant PRS in a main variable; a modular image test short-cuts
    the coprime case.
    """
    p._check(q)
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    if p.is_constant() or q.is_constant():
        return MultiPoly.one(p.nvars)
    if p == q:
        return p.monic()
    if certainly_coprime(p, q):
        return MultiPoly.one(p.nvars)
    return _gcd(p, q).monic()


def _gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    n = p.nvars
    if p.is_zero():
        return q
    if q.is_zero():
        return p
    if p.is_constant() or q.is_constant():
        return MultiPoly.one(n)
    vp, vq = set(p.variables()), set(q.variables())
    shared = vp & vq
    # monomial factor common to both
    mono = [min(p.min_degree_in(i), q.min_degree_in(i)) for i in range(n)]
    if len(p) == 1 or len(q) == 1:
        # every divisor of a monomial is a monomial
        return MultiPoly.monomial(mono)
    if any(mono):
        m = MultiPoly.monomial(mono)
        return m * _gcd(p.divexact(m), q.divexact(m))
    if certainly_coprime(p, q):
        return MultiPoly.one(n)
    if not shared:
        # a common factor would involve only variables of both; none exist
        return MultiPoly.one(n)
    v = max(shared)
    if v not in vp or v not in vq:
        raise AssertionError
    cp, pp = _content_primitive(p, v)
    cq, pq = _content_primitive(q, v)
    c = _gcd(cp, cq)
    g = _subresultant(pp, pq, v)
    _, g = _content_primitive(g, v)
    return c * g


def _content_primitive(p: MultiPoly, v: int) -> tuple[MultiPoly, MultiPoly]:
    coeffs = list(p.coefficients_in(v).values())
    coeffs.sort(key=len)
    c = coeffs[0]
    for other in coeffs[1:]:
        if c.is_constant():
            break
        c = _gcd(c, other)
    if c.is_constant():
        c = MultiPoly.one(p.nvars)
        return c, p
    c = c.monic()
    return c, p.divexact(c)


def _to_uni(p: MultiPoly, v: int) -> list[MultiPoly]:
    parts = p.coefficients_in(v)
    deg = max(parts)
    zero = MultiPoly.zero(p.nvars)
    return [parts.get(j, zero) for j in range(deg + 1)]


def _from_uni(coeffs: list[MultiPoly], v: int) -> MultiPoly:
    n = coeffs[0].nvars
    out = MultiPoly.zero(n)
    x = MultiPoly.variable(n, v)
    for j, c in enumerate(coeffs):
        if not c.is_zero():
            out = out + (c * x ** j if j else c)
    return out


def _trim(a: list[MultiPoly]) -> list[MultiPoly]:
    while len(a) > 1 and a[-1].is_zero():
        a.pop()
    return a


def _prem(a: list[MultiPoly], b: list[MultiPoly]) -> list[MultiPoly]:
    db = len(b) - 1
    lcb = b[-1]
    zero = MultiPoly.zero(lcb.nvars)
    r = list(a)
    e = len(a) - len(b) + 1
    while len(r) - 1 >= db and not (len(r) == 1 and r[0].is_zero()):
        shift = len(r) - 1 - db
        lr = r[-1]
        new = [c * lcb for c in r]
        for j, bc in enumerate(b):
            new[j + shift] = new[j + shift] - lr * bc
        new.pop()
        r = _trim(new) if new else [zero]
        e -= 1
    if e > 0:
        f = lcb ** e
        r = [c * f for c in r]
    return r


def _subresultant(p: MultiPoly, q: MultiPoly, v: int) -> MultiPoly:
    a, b = _to_uni(p, v), _to_uni(q, v)
    if len(a) < len(b):
        a, b = b, a
    n = p.nvars
    g = MultiPoly.one(n)
    h = MultiPoly.one(n)
    while True:
        d = len(a) - len(b)
        r = _prem(a, b)
        if len(r) == 1 and r[0].is_zero():
            return _from_uni(b, v)
        if len(r) == 1:
            return MultiPoly.one(n)
        div = g * h ** d
        a, b = b, [c.divexact(div) for c in r]
        g = a[-1]
        if d == 0:
            pass
        elif d == 1:
            h = g
        else:
            h = (g ** d).divexact(h ** (d - 1))


def gcd_list(polys: Iterable[MultiPoly]) -> MultiPoly:
    polys = list(polys)
    g = MultiPoly.zero(polys[0].nvars)
    for p in sorted(polys, key=len):
        g = poly_gcd(g, p)
        if g.is_constant():
            return MultiPoly.one(polys[0].nvars)
    return g
