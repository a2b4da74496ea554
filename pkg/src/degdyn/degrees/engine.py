"""Degree sequences of iterates, by restriction to generic curves or by exact composition.

Modular route
    The degree of ``f^n`` on ``P^k`` equals the degree of ``f^n`` restricted
    to a generic line.  We push a random line forward over ``F_p`` one
    iterate at a time, parametrized by binary forms, and divide out the
    common factor of the components after every step; the remaining degree
    is exactly ``deg f^n`` unless the prime or the line is unlucky, and bad
    luck can only lower the answer.  Several (prime, line) trials are run
    and the maximum is kept.  On ``P¹×P¹`` a horizontal and a vertical line
    give the two columns of the bidegree matrix.

Exact route
    Iterated composition in :mod:`degdyn.mapalg` with polynomial gcd
    reduction.  Feasible only for small ``n`` but independent of the above.
"""

from __future__ import annotations

import random
from typing import Sequence

import flint

from ..mapalg.maps import BiProjMap, ProjMap
from ..mapalg.poly import _GCD_PRIMES, _ROOTS, ExponentOverflowError, MultiPoly

DEGREE_CAP = 1 << 22


class DegreeGuardError(ArithmeticError):
    """The next iterate would exceed the degree cap."""

    def __init__(self, message: str, largest_safe_n: int):
        super().__init__(f"{message}; largest safe N is {largest_safe_n}")
        self.largest_safe_n = largest_safe_n


class _Forms:
    """Binary forms of a common degree ``label``, stored dehomogenized (``u = 1``)."""

    __slots__ = ("polys", "label")

    def __init__(self, polys: list, label: int):
        self.polys = polys
        self.label = label

    def reduced(self) -> "_Forms":
        nonzero = [p for p in self.polys if not p.is_zero()]
        if not nonzero:
            raise ArithmeticError("all components vanish on the test curve")
        g = nonzero[0]
        for p in nonzero[1:]:
            if g.degree() == 0:
                break
            g = g.gcd(p)
        # common power of u: the root at infinity
        at_inf = min(self.label - p.degree() for p in nonzero)
        if g.degree() > 0:
            polys = [p if p.is_zero() else p // g for p in self.polys]
        else:
            polys = list(self.polys)
        return _Forms(polys, self.label - max(g.degree(), 0) - at_inf)


def _mod_terms(poly: MultiPoly, p: int) -> list[tuple[tuple[int, ...], int]]:
    return poly.mod_terms(p, _ROOTS[p])


def _evaluate(terms, values: Sequence, p: int, cache: list[dict]):
    """Sum of ``c * prod values[j]**e_j`` over nmod_poly values, with power caching."""
    out = flint.nmod_poly([], p)
    for exps, c in terms:
        if c == 0:
            continue
        t = flint.nmod_poly([c], p)
        for j, e in enumerate(exps):
            if e:
                cj = cache[j]
                if e not in cj:
                    cj[e] = values[j] ** e
                t = t * cj[e]
        out = out + t
    return out


def _check_prime(maps_polys: Sequence[MultiPoly], p: int) -> bool:
    for poly in maps_polys:
        for _, c in poly.items():
            if c.d % p == 0:
                return False
    return True


def _proj_trial(f: ProjMap, N: int, p: int, rng: random.Random, cap: int) -> list[int]:
    k1 = f.dim + 1
    terms = [_mod_terms(c, p) for c in f.components]
    forms = _Forms([flint.nmod_poly([rng.randrange(p), rng.randrange(1, p)], p) for _ in range(k1)], 1)
    degs = []
    for n in range(1, N + 1):
        cache = [dict() for _ in range(k1)]
        polys = [_evaluate(t, forms.polys, p, cache) for t in terms]
        forms = _Forms(polys, f.degree * forms.label).reduced()
        degs.append(forms.label)
        if n < N and f.degree * forms.label > cap:
            raise DegreeGuardError(f"degree of iterate {n + 1} may exceed the cap {cap}", n)
    return degs


def _biproj_trial(f: BiProjMap, N: int, p: int, rng: random.Random, cap: int, vertical: bool):
    (a, b), (c, d) = f.matrix
    tz = [_mod_terms(x, p) for x in f.pair_z]
    tw = [_mod_terms(x, p) for x in f.pair_w]
    line = _Forms([flint.nmod_poly([0, 1], p), flint.nmod_poly([1], p)], 1)
    point = _Forms([flint.nmod_poly([rng.randrange(1, p)], p), flint.nmod_poly([rng.randrange(1, p)], p)], 0)
    gz, gw = (point, line) if vertical else (line, point)
    cols = []
    for n in range(1, N + 1):
        vals = gz.polys + gw.polys
        cache = [dict() for _ in range(4)]
        nz = _Forms([_evaluate(t, vals, p, cache) for t in tz], a * gz.label + b * gw.label).reduced()
        nw = _Forms([_evaluate(t, vals, p, cache) for t in tw], c * gz.label + d * gw.label).reduced()
        gz, gw = nz, nw
        cols.append((gz.label, gw.label))
        nxt = max(a + b, c + d) * max(gz.label, gw.label)
        if n < N and nxt > cap:
            raise DegreeGuardError(f"bidegrees of iterate {n + 1} may exceed the cap {cap}", n)
    return cols


def modular_degrees(f: ProjMap | BiProjMap, N: int, trials: int = 2, seed: int = 0,
                    cap: int = DEGREE_CAP):
    """Degrees ``d_1..d_N`` (ProjMap) or bidegree matrices ``B_1..B_N`` (BiProjMap)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    polys = f.components
    primes = [p for p in _GCD_PRIMES if _check_prime(polys, p)]
    if not primes:
        raise ArithmeticError("coefficients are not reducible modulo any working prime")
    best = None
    for t in range(trials):
        p = primes[t % len(primes)]
        rng = random.Random(f"{seed}:{t}")
        if isinstance(f, ProjMap):
            res = _proj_trial(f, N, p, rng, cap)
            best = res if best is None else [max(x, y) for x, y in zip(best, res)]
        else:
            h = _biproj_trial(f, N, p, rng, cap, vertical=False)
            v = _biproj_trial(f, N, p, rng, cap, vertical=True)
            mats = [[[hz, vz], [hw, vw]] for (hz, hw), (vz, vw) in zip(h, v)]
            if best is None:
                best = mats
            else:
                best = [[[max(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(m1, m2)]
                        for m1, m2 in zip(best, mats)]
    return best


def exact_degrees(f: ProjMap | BiProjMap, N: int):
    """Same output as :func:`modular_degrees`, by exact composition and gcd reduction."""
    if N < 1:
        raise ValueError("N must be >= 1")
    out = []
    g = f
    for n in range(1, N + 1):
        if n > 1:
            try:
                g = f.compose(g)
            except ExponentOverflowError as exc:
                raise DegreeGuardError(str(exc), n - 1) from exc
        out.append(g.degree if isinstance(g, ProjMap) else [row[:] for row in g.matrix])
    return out
