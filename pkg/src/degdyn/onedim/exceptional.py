"""Totally ramified points and the exceptional set of a map of the sphere.

Points are homogeneous pairs ``(x, y)``; ``y = 0`` is infinity.  A map of
degree ``d`` is the pair of binary forms ``[P : Q]`` (ascending coefficients
of ``x^j y^{d-j}``).  The local degree at ``X`` is the multiplicity of ``X``
as a root of ``v P - u Q`` where ``f(X) = [u : v]``; the critical points are
the roots of the Wronskian ``p'q - pq'`` (degree ``2d-2`` as a form), a
point of local degree ``e`` being a root of multiplicity ``e - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..numerics.roots import roots
from .maps1d import Poly1C, RatMap1C, _horner, _trim

DERIVATIVE_TOL = 1e-8
POINT_TOL = 1e-7


@dataclass
class ExceptionalSet:
    points: list = field(default_factory=list)  # complex, or math.inf for infinity
    tag: str = "none"

    def __len__(self):
        return len(self.points)

    def contains(self, z, tol: float = POINT_TOL) -> bool:
        for p in self.points:
            if p == math.inf:
                if z == math.inf or (isinstance(z, complex) and math.isinf(abs(z))):
                    return True
            elif z != math.inf and abs(complex(z) - p) <= tol * (1 + abs(p)):
                return True
        return False

    def to_json(self) -> dict:
        return {"tag": self.tag,
                "points": ["inf" if p == math.inf else [p.real, p.imag] for p in self.points]}


def _normalize(pt):
    x, y = complex(pt[0]), complex(pt[1])
    return (x / y, 1 + 0j) if abs(y) >= abs(x) else (1 + 0j, y / x)


def _form_eval(c: np.ndarray, pt):
    """Binary form ``sum c_j x^j y^{d-j}`` at a normalized point."""
    x, y = pt
    if y == 1:
        return complex(_horner(c, x))
    return complex(_horner(c[::-1], y))


def _apply(f, pt):
    P, Q = f.binary_forms()
    return _normalize((_form_eval(P, pt), _form_eval(Q, pt)))


def _chart_poly(c: np.ndarray, pt) -> tuple[np.ndarray, complex]:
    """The form as a polynomial in the affine chart containing ``pt`` and the chart coordinate."""
    x, y = pt
    return (c, x) if y == 1 else (c[::-1], y)


def _root_multiplicity(c: np.ndarray, t0: complex) -> int:
    """Order of vanishing at ``t0``: first derivative not small relative to the coefficient scale."""
    c = np.asarray(c, dtype=complex)
    d = len(c) - 1
    scale = float(np.sum(np.abs(c)) * max(1.0, abs(t0)) ** d)
    if scale == 0:
        return d + 1
    cur = c.copy()
    for j in range(d + 1):
        val = complex(_horner(cur, t0)) if len(cur) else 0j
        if abs(val) / math.factorial(j) > DERIVATIVE_TOL * scale:
            return j
        cur = np.polynomial.polynomial.polyder(cur) if len(cur) > 1 else np.zeros(1, dtype=complex)
    return d + 1


def local_degree(f: Poly1C | RatMap1C, pt) -> int:
    """Local degree of ``f`` at a homogeneous point."""
    pt = _normalize(pt)
    u, v = _apply(f, pt)
    P, Q = f.binary_forms()
    form = v * P - u * Q
    c, t0 = _chart_poly(form, pt)
    return _root_multiplicity(c, t0)


def _wronskian(f) -> np.ndarray:
    P, Q = f.binary_forms()
    pp = np.polynomial.polynomial
    w = pp.polysub(pp.polymul(pp.polyder(P), Q), pp.polymul(P, pp.polyder(Q)))
    out = np.zeros(2 * f.degree - 1, dtype=complex)
    out[: len(w)] = w[: len(out)]
    return out


def _polish_on_derivative(c: np.ndarray, t: complex, order: int) -> complex:
    """Newton on the ``order``-th derivative, where a root of multiplicity ``order+1`` is simple."""
    pp = np.polynomial.polynomial
    g = c.copy()
    for _ in range(order):
        g = pp.polyder(g)
    dg = pp.polyder(g) if len(g) > 1 else np.zeros(1)
    for _ in range(8):
        den = complex(_horner(dg, t))
        if den == 0:
            break
        step = complex(_horner(g, t)) / den
        if not np.isfinite(step):
            break
        t -= step
        if abs(step) <= 1e-16 * max(1, abs(t)):
            break
    return t


def totally_ramified_points(f: Poly1C | RatMap1C) -> list:
    """Homogeneous points with local degree equal to the degree of ``f``."""
    d = f.degree
    W = _wronskian(f)
    Wt = _trim(W)
    cands = []
    at_inf = len(W) - len(Wt)
    if at_inf >= d - 1:
        cands.append((1 + 0j, 0j))
    if len(Wt) >= d:
        rs = roots(Wt, cluster_tol=1e-3 * (1 + float(np.max(np.abs(Wt[:-1] / Wt[-1])))))
        for t, m in zip(rs.roots, rs.multiplicities):
            if m >= d - 1:
                t = _polish_on_derivative(Wt, complex(t), d - 2)
                cands.append(_normalize((t, 1)))
    return [pt for pt in cands if local_degree(f, pt) == d]


def _to_affine(pt):
    x, y = pt
    return math.inf if y == 0 else complex(x / y)


def exceptional_points(f: Poly1C | RatMap1C) -> ExceptionalSet:
    """Totally ramified points that stay totally ramified for two more steps."""
    d = f.degree
    keep = []
    for pt in totally_ramified_points(f):
        q = pt
        ok = True
        for _ in range(2):
            q = _apply(f, q)
            if local_degree(f, q) != d:
                ok = False
                break
        if ok:
            keep.append(_to_affine(pt))
    if len(keep) == 2:
        tag = "power-map"
    elif len(keep) == 1:
        tag = "polynomial"
    else:
        tag = "none"
    return ExceptionalSet(keep, tag)
