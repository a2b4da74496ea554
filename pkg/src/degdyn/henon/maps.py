"""Hénon maps ``(z, w) -> (p(z) - a w, z)`` and their compositions."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from ..mapalg.gaussian import GaussianRational
from ..mapalg.maps import AffineMap
from ..mapalg.poly import MultiPoly
from ..onedim.maps1d import Poly1C, parse_map1d

INVERSE_TOL = 1e-9


def _exact(c: complex) -> GaussianRational:
    """Gaussian rational with the decimal value that ``repr`` shows (0.3 -> 3/10)."""
    c = complex(c)
    return GaussianRational(Fraction(repr(c.real)), Fraction(repr(c.imag)))


class HenonGenerator:
    """One factor ``g(z, w) = (p(z) - a w, z)`` with ``deg p >= 2`` and ``a != 0``."""

    def __init__(self, p, a: complex):
        if isinstance(p, str):
            p = parse_map1d(p)
        if not isinstance(p, Poly1C):
            p = Poly1C(p)
        a = complex(a)
        if a == 0:
            raise ValueError("the Jacobian constant a must be nonzero")
        self.p = p
        self.a = a

    @property
    def degree(self) -> int:
        return self.p.degree

    def __call__(self, z, w):
        return self.p(z) - self.a * w, z

    def inverse(self, z, w):
        return w, (self.p(w) - z) / self.a

    def swapped_inverse(self) -> "HenonGenerator":
        """``s g^{-1} s`` with ``s(z, w) = (w, z)``: the generator ``((p(z) - w)/a, z)``."""
        return HenonGenerator(Poly1C(self.p.coeffs / self.a), 1 / self.a)

    def jacobian(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        J = np.zeros(z.shape + (2, 2), dtype=complex)
        J[..., 0, 0] = self.p.derivative(z)
        J[..., 0, 1] = -self.a
        J[..., 1, 0] = 1
        return J

    def affine_map(self) -> AffineMap:
        z, w = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
        p = MultiPoly.zero(2)
        for j, c in enumerate(self.p.coeffs):
            if c != 0:
                p = p + MultiPoly.monomial((j, 0), _exact(c))
        return AffineMap([p - w.scale(_exact(self.a)), z], ["z", "w"])

    def inverse_affine_map(self) -> AffineMap:
        z, w = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
        p_w = MultiPoly.zero(2)
        for j, c in enumerate(self.p.coeffs):
            if c != 0:
                p_w = p_w + MultiPoly.monomial((0, j), _exact(c))
        return AffineMap([w, (p_w - z).scale(_exact(self.a).inverse())], ["z", "w"])

    def __repr__(self):
        return f"HenonGenerator(p={self.p.coeffs.tolist()}, a={self.a})"


class HenonMap:
    """The composition ``g_{m-1} o ... o g_0`` of Hénon generators (``g_0`` acts first)."""

    def __init__(self, generators: Sequence[HenonGenerator], check: bool = True):
        if not generators:
            raise ValueError("a Hénon map needs at least one generator")
        self.generators = list(generators)
        if check:
            self._check_inverse()

    @classmethod
    def single(cls, p, a: complex = 1.0) -> "HenonMap":
        return cls([HenonGenerator(p, a)])

    @classmethod
    def chain(cls, pairs) -> "HenonMap":
        """From ``[(p, a), ...]`` in order of application."""
        return cls([HenonGenerator(p, a) for p, a in pairs])

    @property
    def degree(self) -> int:
        return int(np.prod([g.degree for g in self.generators]))

    @property
    def jacobian_constant(self) -> complex:
        return complex(np.prod([g.a for g in self.generators]))

    def __call__(self, z, w):
        for g in self.generators:
            z, w = g(z, w)
        return z, w

    def inverse(self, z, w):
        for g in reversed(self.generators):
            z, w = g.inverse(z, w)
        return z, w

    def iterate(self, z, w, n: int):
        for _ in range(n):
            z, w = self(z, w)
        return z, w

    def jacobian(self, z, w) -> np.ndarray:
        """``D h`` at ``(z, w)`` by the chain rule."""
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        J = np.broadcast_to(np.eye(2, dtype=complex), z.shape + (2, 2)).copy()
        for g in self.generators:
            J = g.jacobian(z) @ J
            z, w = g(z, w)
        return J

    def swapped_inverse(self) -> "HenonMap":
        """``s h^{-1} s`` as a Hénon chain, ``s`` the coordinate swap."""
        return HenonMap([g.swapped_inverse() for g in reversed(self.generators)], check=False)

    def affine_map(self) -> AffineMap:
        f = self.generators[0].affine_map()
        for g in self.generators[1:]:
            f = g.affine_map().compose(f)
        return f

    def inverse_affine_map(self) -> AffineMap:
        f = self.generators[-1].inverse_affine_map()
        for g in reversed(self.generators[:-1]):
            f = g.inverse_affine_map().compose(f)
        return f

    def _check_inverse(self, probes: int = 32):
        rs = np.random.default_rng(12345)
        z = rs.uniform(-1, 1, probes) + 1j * rs.uniform(-1, 1, probes)
        w = rs.uniform(-1, 1, probes) + 1j * rs.uniform(-1, 1, probes)
        z1, w1 = self(*self.inverse(z, w))
        err = np.max(np.abs(z1 - z) + np.abs(w1 - w)) / (1 + np.max(np.abs(z) + np.abs(w)))
        if not err <= INVERSE_TOL:
            raise ArithmeticError(f"h o h^-1 differs from the identity by {err:.2e}")

    def __repr__(self):
        return f"HenonMap({self.generators})"


def parse_henon(text: str, a: complex = 1.0) -> HenonMap:
    """``"z^2-2"`` (with ``a``) or a chain ``"z^2-2 @ 0.3; z^3 @ 1"`` applied left to right."""
    parts = [s.strip() for s in text.split(";") if s.strip()]
    gens = []
    for s in parts:
        if "@" in s:
            p, aa = s.split("@", 1)
            gens.append(HenonGenerator(p.strip(), complex(aa.strip().replace("i", "j"))))
        else:
            gens.append(HenonGenerator(s, a))
    return HenonMap(gens)
