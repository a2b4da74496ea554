"""Double-precision polynomial and rational maps of the Riemann sphere."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..mapalg.parse import parse_expressions
from ..mapalg.ratfunc import RationalFunction

COPRIME_TOL = 1e-12


def _trim(c) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    nz = np.nonzero(c)[0]
    return c[: nz[-1] + 1] if len(nz) else c[:1] * 0


def _horner(c: np.ndarray, z):
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, c[-1], dtype=complex)
    for a in c[-2::-1]:
        out = out * z + a
    return out


def _reversed_eval(c: np.ndarray, w):
    """``sum c_j w^{d-j}``: the polynomial in the chart ``w = 1/z``, times ``w^d``."""
    return _horner(c[::-1], w)


class Poly1C:
    """Polynomial ``sum coeffs[j] z^j`` of degree ``>= 2`` with complex coefficients."""

    def __init__(self, coeffs):
        c = _trim(coeffs)
        if len(c) < 3:
            raise ValueError("a dynamical polynomial needs degree >= 2")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        self.coeffs = c
        self._dc = np.polynomial.polynomial.polyder(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def is_monic(self, tol: float = 0.0) -> bool:
        return abs(self.leading - 1) <= tol

    def __call__(self, z):
        return _horner(self.coeffs, z)

    def derivative(self, z):
        return _horner(self._dc, z)

    @property
    def derivative_coeffs(self) -> np.ndarray:
        return self._dc

    def log_derivative_ratio(self, z):
        """``z f'(z) / f(z)``, computed in the chart at infinity for large ``|z|``."""
        z = np.asarray(z, dtype=complex)
        out = np.empty(z.shape, dtype=complex)
        big = np.abs(z) > 1.0
        d = self.degree
        jc = np.arange(d + 1) * self.coeffs
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            zs = z[~big]
            out[~big] = zs * self.derivative(zs) / self(zs)
            w = np.where(np.isinf(z[big]), 0, 1 / z[big])
            out[big] = _reversed_eval(jc, w) / _reversed_eval(self.coeffs, w)
        return out

    def iterate(self, z, n: int):
        for _ in range(n):
            z = self(z)
        return z

    def critical_points(self, seed: int = 0) -> np.ndarray:
        """Roots of ``f'`` repeated by multiplicity."""
        from ..numerics.roots import roots
        return roots(self._dc, seed=seed).with_multiplicity()

    def is_power_map(self) -> bool:
        return bool(np.all(self.coeffs[:-1] == 0))

    def binary_forms(self) -> tuple[np.ndarray, np.ndarray]:
        q = np.zeros(self.degree + 1, dtype=complex)
        q[0] = 1
        return self.coeffs.copy(), q

    def __eq__(self, other):
        return isinstance(other, Poly1C) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"Poly1C({self.coeffs.tolist()})"


class RatMap1C:
    """``P/Q`` with ``max(deg P, deg Q) >= 2`` and ``P, Q`` numerically coprime."""

    def __init__(self, num, den):
        p, q = _trim(num), _trim(den)
        if not np.any(q):
            raise ZeroDivisionError("denominator is zero")
        d = max(len(p), len(q)) - 1
        if d < 2:
            raise ValueError("a dynamical rational map needs degree >= 2")
        self.num = np.concatenate([p, np.zeros(d + 1 - len(p))])
        self.den = np.concatenate([q, np.zeros(d + 1 - len(q))])
        gap = coprimality_gap(self.num, self.den)
        if gap < COPRIME_TOL:
            raise ValueError(f"numerator and denominator share a root (gap {gap:.2e})")
        self._dn = np.polynomial.polynomial.polyder(self.num)
        self._dd = np.polynomial.polynomial.polyder(self.den)

    @property
    def degree(self) -> int:
        return len(self.num) - 1

    def __call__(self, z):
        with np.errstate(divide="ignore", invalid="ignore"):
            return _horner(self.num, z) / _horner(self.den, z)

    def derivative(self, z):
        p, q = _horner(self.num, z), _horner(self.den, z)
        dp, dq = _horner(self._dn, z), _horner(self._dd, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (dp * q - p * dq) / (q * q)

    def spherical_derivative(self, z):
        z = np.asarray(z, dtype=complex)
        fz = self(z)
        with np.errstate(invalid="ignore", over="ignore"):
            return np.abs(self.derivative(z)) * (1 + np.abs(z) ** 2) / (1 + np.abs(fz) ** 2)

    def critical_points(self, seed: int = 0) -> np.ndarray:
        """Finite critical points (roots of ``P'Q - PQ'``) repeated by multiplicity."""
        from ..numerics.roots import roots
        w = _trim(np.polynomial.polynomial.polysub(
            np.polynomial.polynomial.polymul(self._dn, self.den),
            np.polynomial.polynomial.polymul(self.num, self._dd)))
        if len(w) < 2:
            return np.zeros(0, dtype=complex)
        return roots(w, seed=seed).with_multiplicity()

    def binary_forms(self) -> tuple[np.ndarray, np.ndarray]:
        return self.num.copy(), self.den.copy()

    def __repr__(self):
        return f"RatMap1C({self.num.tolist()}, {self.den.tolist()})"


def coprimality_gap(p: np.ndarray, q: np.ndarray) -> float:
    """Smallest over largest singular value of the Sylvester matrix; zero iff a common root."""
    p, q = _trim(p), _trim(q)
    m, n = len(p) - 1, len(q) - 1
    if m == 0 or n == 0:
        return 1.0
    S = np.zeros((m + n, m + n), dtype=complex)
    for r in range(n):
        S[r, r:r + m + 1] = p[::-1]
    for r in range(m):
        S[n + r, r:r + n + 1] = q[::-1]
    s = np.linalg.svd(S, compute_uv=False)
    return float(s[-1] / s[0])


def _complex_coeffs(r: RationalFunction) -> tuple[np.ndarray, np.ndarray]:
    def dense(p):
        c = np.zeros(max(p.degree(), 0) + 1, dtype=complex)
        for (e,), v in p.complex_terms():
            c[e] += v
        return c
    return dense(r.num), dense(r.den)


def parse_map1d(text: str) -> Poly1C | RatMap1C:
    """Parse a one-variable expression such as ``"z^2 - 2"`` or ``"(z^2+1)/(2*z)"``."""
    shape, names, comps = parse_expressions(text)
    if len(comps) != 1 or len(names) != 1:
        raise ValueError("expected a single expression in one variable")
    r = comps[0].reduced()
    num, den = _complex_coeffs(r)
    if r.is_polynomial():
        return Poly1C(num / den[0])
    return RatMap1C(num, den)


@dataclass(frozen=True)
class Conjugacy:
    """Affine change ``A(z) = a z + b``."""

    a: complex
    b: complex

    def __call__(self, z):
        return self.a * np.asarray(z) + self.b

    def inverse(self, z):
        return (np.asarray(z) - self.b) / self.a

    def is_identity(self) -> bool:
        return self.a == 1 and self.b == 0


def conjugate(f: Poly1C, A: Conjugacy) -> Poly1C:
    """``A ∘ f ∘ A^{-1}`` as a new polynomial."""
    lin = np.array([-A.b / A.a, 1 / A.a], dtype=complex)
    out = np.array([f.coeffs[-1]], dtype=complex)
    for a in f.coeffs[-2::-1]:
        out = np.polynomial.polynomial.polyadd(np.polynomial.polynomial.polymul(out, lin), [a])
    out = A.a * out
    out[0] += A.b
    return Poly1C(out)


def normalize_monic_centered(f: Poly1C) -> tuple[Poly1C, Conjugacy]:
    """Conjugate to ``z^d + a_{d-2} z^{d-2} + ...`` by an affine map ``A``.

    ``a^{d-1}`` equals the leading coefficient (principal root) and the
    translation kills the ``z^{d-1}`` term.
    """
    d = f.degree
    lead, sub = f.coeffs[-1], f.coeffs[-2]
    a = complex(lead) ** (1.0 / (d - 1))
    if lead == 1:
        a = 1 + 0j
    b = sub * a / (d * lead)
    A = Conjugacy(a, complex(b))
    if A.is_identity():
        return f, A
    g = conjugate(f, A)
    c = g.coeffs.copy()
    # remove rounding noise in the two normalized coefficients
    c[-1], c[-2] = 1, 0
    return Poly1C(c), A
