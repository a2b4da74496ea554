"""Escape-rate Green function of a polynomial with a certified tail bound.

For ``f(z) = c z^d + ...`` write ``S`` for the sum of the moduli of the
lower coefficients.  When ``|z| >= R`` with

    R = max(1, 2S/|c|, (4/|c|)^{1/(d-1)})

we have ``f(z) = c z^d (1 + e)`` with ``|e| <= S/(|c||z|) <= 1/2`` and
``|f(z)| >= 2|z|``.  Writing ``L_n = log|f^n(z)|``, each step satisfies
``L_{n+1} = d L_n + log|c| + eta_n`` with ``|eta_n| <= 2S/(|c||z_n|)``, so
``G = d^{-n} (L_n + log|c|/(d-1)) + sum_{m>=n} d^{-m-1} eta_m`` and the tail
is at most ``d^{-n-1} (2S/(|c||z_n|)) 2d/(2d-1)`` since ``|z_m|`` at least
doubles.  Once an orbit escapes it is iterated a few more steps (bounded
by ``|z| < 1e100``) to shrink this bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .maps1d import Poly1C

EXTRA_STEPS = 64
BIG = 1e100


@dataclass
class GreenParams:
    escape_radius: float | None = None
    max_iter: int = 200
    tail_constant: float | None = None


@dataclass
class GreenValue:
    value: float
    error: float
    iterations: int
    escaped: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _lower_sum(f: Poly1C) -> float:
    return float(np.sum(np.abs(f.coeffs[:-1])))


def escape_radius(f: Poly1C) -> float:
    d, c, S = f.degree, abs(f.leading), _lower_sum(f)
    return max(1.0, 2 * S / c, (4 / c) ** (1.0 / (d - 1)))


def green_offset(f: Poly1C) -> float:
    """``lim G(z) - log|z|`` as ``z -> infinity``: ``log|c|/(d-1)``."""
    return math.log(abs(f.leading)) / (f.degree - 1)


def resolve_params(f: Poly1C, params: GreenParams | None) -> GreenParams:
    p = params or GreenParams()
    R = p.escape_radius if p.escape_radius is not None else escape_radius(f)
    R = max(R, escape_radius(f))
    d = f.degree
    C = p.tail_constant
    if C is None:
        C = 2 * _lower_sum(f) / abs(f.leading) * 2 * d / (2 * d - 1)
    return GreenParams(R, p.max_iter, C)


def green_array(f: Poly1C, z, params: GreenParams | None = None):
    """Vectorized Green function: ``(values, errors, iterations, escaped)``."""
    p = resolve_params(f, params)
    z0 = np.asarray(z, dtype=complex)
    if np.any(np.isnan(z0)):
        raise ValueError("NaN input to the Green function")
    shape = z0.shape
    zs = z0.ravel().copy()
    m = len(zs)
    d = f.degree
    offset = green_offset(f)
    R, C = p.escape_radius, p.tail_constant
    values = np.zeros(m)
    errors = np.zeros(m)
    iters = np.full(m, p.max_iter, dtype=int)
    escaped = np.zeros(m, dtype=bool)
    active = np.arange(m)
    # points already at infinity (inf input) have G = inf
    inf_in = np.isinf(zs)
    values[inf_in] = np.inf
    escaped[inf_in] = True
    iters[inf_in] = 0
    active = active[~inf_in]
    n = 0
    cur = zs[active]
    while len(active) and n <= p.max_iter:
        out = np.abs(cur) > R
        if np.any(out):
            idx = active[out]
            zn = cur[out]
            steps = np.full(len(zn), n)
            # refine: keep iterating while the tail bound is not negligible
            if C > 0:
                for _ in range(EXTRA_STEPS):
                    grow = (np.abs(zn) < BIG) & (C / np.abs(zn) * float(d) ** (-steps - 1) > 1e-17)
                    if not grow.any():
                        break
                    zn = np.where(grow, f(np.where(grow, zn, 0)), zn)
                    steps = steps + grow
            scale = np.power(float(d), -steps.astype(float))
            values[idx] = scale * (np.log(np.abs(zn)) + offset)
            errors[idx] = scale / d * (C / np.abs(zn))
            iters[idx] = steps
            escaped[idx] = True
            active, cur = active[~out], cur[~out]
        if n == p.max_iter or not len(active):
            break
        cur = f(cur)
        n += 1
    if len(active):
        bound = max(0.0, math.log(R) + offset + C / R)
        errors[active] = float(d) ** (-p.max_iter) * bound
    return (values.reshape(shape), errors.reshape(shape), iters.reshape(shape),
            escaped.reshape(shape))


def green(f: Poly1C, z: complex, params: GreenParams | None = None) -> GreenValue:
    """``G_f(z) = lim d^{-n} log+ |f^n(z)|`` with a certified error bound."""
    v, e, it, esc = green_array(f, np.array([z]), params)
    return GreenValue(float(v[0]), float(e[0]), int(it[0]), bool(esc[0]))


def equilibrium_potential(f: Poly1C, params: GreenParams | None = None):
    """Log-potential of the equilibrium measure: ``G - log|c|/(d-1)``."""
    off = green_offset(f)

    def potential(p):
        return green_array(f, p, params)[0] - off
    return potential


@dataclass
class CapacityCheck:
    offset: float
    capacity: float
    radii: list
    deviations: list
    max_deviation: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def capacity_check(f: Poly1C, radii=(1e2, 1e4), probes: int = 16,
                   params: GreenParams | None = None) -> CapacityCheck:
    """Deviation of ``G(z) - log|z|`` from ``log|c|/(d-1)`` on circles of the given radii."""
    off = green_offset(f)
    if f.is_monic() and off != 0:
        raise AssertionError("monic polynomial must have zero offset")
    theta = 2 * np.pi * (np.arange(probes) + 0.5) / probes
    devs = []
    for r in radii:
        z = r * np.exp(1j * theta)
        g = green_array(f, z, params)[0]
        devs.append(float(np.max(np.abs(g - np.log(r) - off))))
    return CapacityCheck(off, math.exp(-off), list(radii), devs, max(devs))


def green_grid(f: Poly1C, grid, params: GreenParams | None = None) -> np.ndarray:
    """Green function on a :class:`degdyn.numerics.Grid`, rows from top to bottom."""
    return green_array(f, grid.points(), params)[0]
