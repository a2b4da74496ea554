"""Green functions ``G^+`` and ``G^-`` of a Hénon chain with certified tails.

For a generator ``(p(z) - a w, z)``, ``p = c z^d + ...``, let ``S`` be the
sum of the moduli of the lower coefficients of ``p`` and set

    R = max(1, 2(S + |a|)/|c|, (4/|c|)^{1/(d-1)})

(maximised over the chain).  On ``V^+ = {|z| >= max(|w|, R)}`` the first
coordinate is ``c z^d (1 + e)`` with ``|e| <= 1/2``, at least doubles, and
dominates the second, so ``V^+`` is invariant and ``log||.||`` obeys the
same increment bound as in one variable with ``S`` replaced by ``S + |a|``.
Outside ``V^+`` the crude bound
``log+||g(x)|| <= d log+||x|| + log+ (|c| + S + |a|)`` still holds, which
bounds ``G^+`` on orbits that have not escaped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..onedim.green import GreenValue
from .maps import HenonMap

BIG = 1e100
EXTRA_STEPS = 64


@dataclass
class HenonGreenParams:
    max_iter: int = 200  # iterations of the whole chain


@dataclass
class _ChainConstants:
    R: float
    E: float
    offsets: np.ndarray  # offset when the next generator to act has index r
    bounds: np.ndarray  # sup of the normalised G - log+||x|| off V^+, same indexing
    degrees: np.ndarray


def _constants(h: HenonMap) -> _ChainConstants:
    d = np.array([g.degree for g in h.generators], dtype=float)
    c = np.array([abs(g.p.leading) for g in h.generators])
    S = np.array([float(np.sum(np.abs(g.p.coeffs[:-1]))) for g in h.generators])
    A = np.array([abs(g.a) for g in h.generators])
    R = float(max(max(1.0, 2 * (s + a) / cc, (4 / cc) ** (1 / (dd - 1)))
                  for s, a, cc, dd in zip(S, A, c, d)))
    E = float(np.max(2 * (S + A) / c))
    m = len(d)
    D = float(np.prod(d))
    logc = np.log(c)
    logB = np.log(np.maximum(1.0, c + S + A))
    offsets = np.zeros(m)
    bounds = np.zeros(m)
    for r in range(m):
        prod = 1.0
        for j in range(m):
            k = (r + j) % m
            prod *= d[k]
            offsets[r] += logc[k] / prod
            bounds[r] += logB[k] / prod
    offsets /= 1 - 1 / D
    bounds /= 1 - 1 / D
    return _ChainConstants(R, E, offsets, bounds, d)


def green_plus_array(h: HenonMap, z, w, params: HenonGreenParams | None = None):
    """Vectorized ``G^+``: ``(values, errors, generator_steps, escaped)``."""
    p = params or HenonGreenParams()
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    z, w = np.broadcast_arrays(z, w)
    shape = z.shape
    if np.any(np.isnan(z)) or np.any(np.isnan(w)):
        raise ValueError("NaN input to the Green function")
    K = _constants(h)
    m = len(h.generators)
    zs, ws = z.ravel().astype(complex), w.ravel().astype(complex)
    n = len(zs)
    values, errors = np.zeros(n), np.zeros(n)
    steps = np.zeros(n, dtype=int)
    escaped = np.zeros(n, dtype=bool)
    active = np.arange(n)
    logD = 0.0  # log of the product of degrees applied so far
    total = p.max_iter * m
    for s in range(total + 1):
        r = s % m
        az = np.abs(zs[active])
        out = (az >= np.maximum(np.abs(ws[active]), K.R))
        if out.any():
            idx = active[out]
            zo, wo = zs[idx], ws[idx]
            ld = np.full(len(idx), logD)
            pos = np.full(len(idx), s)
            for _ in range(EXTRA_STEPS * m):
                tail = (2 / 3) * K.E / np.abs(zo) * np.exp(-ld)
                grow = (np.abs(zo) < BIG) & (tail > 1e-17)
                if not grow.any():
                    break
                for gi in np.unique(pos[grow] % m):
                    sel = grow & (pos % m == gi)
                    g = h.generators[gi]
                    zo[sel], wo[sel] = g(zo[sel], wo[sel])
                    ld[sel] += math.log(g.degree)
                    pos[sel] += 1
            scale = np.exp(-ld)
            values[idx] = scale * (np.log(np.abs(zo)) + K.offsets[pos % m])
            errors[idx] = (2 / 3) * K.E / np.abs(zo) * scale
            steps[idx] = pos
            escaped[idx] = True
            active = active[~out]
        if not len(active) or s == total:
            break
        g = h.generators[r]
        zs[active], ws[active] = g(zs[active], ws[active])
        logD += math.log(g.degree)
    if len(active):
        norm = np.maximum(np.abs(zs[active]), np.abs(ws[active]))
        lp = np.log(np.maximum(norm, 1.0))
        errors[active] = math.exp(-logD) * (lp + K.bounds[total % m])
        steps[active] = total
    return (values.reshape(shape), errors.reshape(shape), steps.reshape(shape),
            escaped.reshape(shape))


def green_plus(h: HenonMap, point, params: HenonGreenParams | None = None) -> GreenValue:
    """``G^+(x) = lim d^{-n} log+ ||h^n(x)||`` (max norm) with a certified error bound."""
    v, e, it, esc = green_plus_array(h, np.array([point[0]]), np.array([point[1]]), params)
    return GreenValue(float(v[0]), float(e[0]), int(it[0]), bool(esc[0]))


def green_minus_array(h: HenonMap, z, w, params: HenonGreenParams | None = None):
    """``G^-`` through ``G^+`` of the swapped inverse chain (the max norm is swap-invariant)."""
    return green_plus_array(h.swapped_inverse(), w, z, params)


def green_minus(h: HenonMap, point, params: HenonGreenParams | None = None) -> GreenValue:
    v, e, it, esc = green_minus_array(h, np.array([point[0]]), np.array([point[1]]), params)
    return GreenValue(float(v[0]), float(e[0]), int(it[0]), bool(esc[0]))


@dataclass
class PointClass:
    in_K_plus: bool
    in_K_minus: bool
    in_K: bool
    green_plus: GreenValue
    green_minus: GreenValue

    def to_json(self) -> dict:
        return {"in_K_plus": self.in_K_plus, "in_K_minus": self.in_K_minus, "in_K": self.in_K,
                "green_plus": self.green_plus.to_json(), "green_minus": self.green_minus.to_json()}


def classify_point(h: HenonMap, point, params: HenonGreenParams | None = None) -> PointClass:
    """Membership in ``K^+``, ``K^-`` and ``K``: a set is entered iff its orbit never escaped."""
    gp = green_plus(h, point, params)
    gm = green_minus(h, point, params)
    kp, km = not gp.escaped, not gm.escaped
    return PointClass(kp, km, kp and km, gp, gm)
