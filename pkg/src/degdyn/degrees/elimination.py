"""Counting solutions of polynomial systems in C² by resultant elimination.

Pipeline: random exact linear change of coordinates, numeric Sylvester
resultant in the second variable sampled on a circle and interpolated by
FFT, roots of the resultant, back-substitution, one Newton-polish pass on
the full system, residual verification and clustering.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..mapalg.gaussian import GaussianRational
from ..mapalg.maps import AffineMap
from ..mapalg.poly import MultiPoly
from ..numerics.roots import roots

CLUSTER_TOL = 1e-6
MAX_DEGENERATE = 5


class EliminationError(ArithmeticError):
    """Trials disagree or the elimination stays degenerate."""

    def __init__(self, message: str, counts: list | None = None):
        super().__init__(message if counts is None else f"{message}: counts {counts}")
        self.counts = counts or []


class _DegenerateResultant(ArithmeticError):
    pass


@dataclass
class Solutions:
    points: np.ndarray  # (m, 2) distinct solutions in the original coordinates
    multiplicities: np.ndarray
    residual: float

    @property
    def count(self) -> int:
        return int(self.multiplicities.sum())


@dataclass
class FixedPointCount:
    period: int
    affine_count: int
    lefschetz_total: int | None
    points: list = field(default_factory=list)
    multiplicities: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"period": self.period, "affine_count": self.affine_count,
                "lefschetz_total": self.lefschetz_total,
                "points": [[[p.real, p.imag] for p in pt] for pt in self.points],
                "multiplicities": list(self.multiplicities)}


class _NumPoly2:
    """Bivariate complex polynomial as a dense coefficient array ``c[i, j]`` of ``u^i v^j``."""

    def __init__(self, p: MultiPoly):
        di, dj = max(p.degree_in(0), 0), max(p.degree_in(1), 0)
        c = np.zeros((di + 1, dj + 1), dtype=complex)
        for (i, j), v in p.complex_terms():
            c[i, j] += v
        self.c = c
        self.total = p.degree()

    def __call__(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=complex), np.asarray(v, dtype=complex))
        return np.polynomial.polynomial.polyval2d(u, v, self.c)

    def scale(self, u, v):
        u, v = np.broadcast_arrays(np.abs(u), np.abs(v))
        return np.polynomial.polynomial.polyval2d(u, v, np.abs(self.c))

    def du(self):
        return np.polynomial.polynomial.polyder(self.c, axis=0)

    def dv(self):
        return np.polynomial.polynomial.polyder(self.c, axis=1)

    def in_v_at(self, u0: complex) -> np.ndarray:
        """Coefficients in ``v`` (ascending) after setting ``u = u0``."""
        return np.polynomial.polynomial.polyval(u0, self.c)


def _rand_gauss(rng: random.Random) -> GaussianRational:
    return GaussianRational(Fraction(rng.randint(-7, 7), 7), Fraction(rng.randint(-7, 7), 7))


def _coordinate_change(polys: list[MultiPoly], rng: random.Random):
    """Substitute ``(z, w) = (u + a v, b u + v)`` with random exact ``a, b`` (det != 0)."""
    while True:
        a, b = _rand_gauss(rng), _rand_gauss(rng)
        if not (GaussianRational(1) - a * b).is_zero():
            break
    u, v = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    z = u + v.scale(a)
    w = u.scale(b) + v
    return [p.substitute([z, w]) for p in polys], (a, b)


def _sylvester_det(pc: np.ndarray, qc: np.ndarray) -> complex:
    m, n = len(pc) - 1, len(qc) - 1
    size = m + n
    if size == 0:
        return 1.0 + 0j, 1.0
    S = np.zeros((size, size), dtype=complex)
    for r in range(n):
        S[r, r:r + m + 1] = pc[::-1]
    for r in range(m):
        S[n + r, r:r + n + 1] = qc[::-1]
    return np.linalg.det(S), float(np.prod(np.linalg.norm(S, axis=1)))


def _solve_system(P: _NumPoly2, Q: _NumPoly2, rng: random.Random) -> Solutions:
    m, n = P.c.shape[1] - 1, Q.c.shape[1] - 1
    bound = max(P.total, 0) * max(Q.total, 0)
    if m == 0 and n == 0:
        raise _DegenerateResultant("system does not involve the eliminated variable")
    M = 2 * bound + 1
    rho = rng.uniform(0.6, 1.4)
    us = rho * np.exp(2j * np.pi * np.arange(M) / M)
    vals = np.empty(M, dtype=complex)
    hadamard = np.empty(M)
    for j, u0 in enumerate(us):
        # formal v-degrees are kept: after the change the leading coefficients are constants
        vals[j], hadamard[j] = _sylvester_det(P.in_v_at(u0), Q.in_v_at(u0))
    if np.max(np.abs(vals) / hadamard) < 1e-13:
        raise _DegenerateResultant("resultant vanishes identically")
    coef_scaled = np.fft.fft(vals) / M  # c_k rho^k
    mag = np.abs(coef_scaled)
    top = mag.max()
    keep = np.nonzero(mag[: bound + 1] > 1e-10 * top)[0]
    deg = int(keep.max()) if len(keep) else 0
    if deg == 0:
        return Solutions(np.zeros((0, 2), dtype=complex), np.zeros(0, dtype=int), 0.0)
    coeffs = coef_scaled[: deg + 1] / rho ** np.arange(deg + 1)
    rs = roots(coeffs)
    pts, mults, resid = [], [], 0.0
    dPu, dPv, dQu, dQv = P.du(), P.dv(), Q.du(), Q.dv()
    for u0, mult in zip(rs.roots, rs.multiplicities):
        pv = P.in_v_at(u0)
        while len(pv) > 1 and pv[-1] == 0:
            pv = pv[:-1]
        if len(pv) > 1:
            cand = roots(pv).roots
        else:
            qv = Q.in_v_at(u0)
            cand = roots(qv).roots
        qv_vals = np.abs(Q(u0, cand)) / np.maximum(Q.scale(u0, cand), np.abs(Q.c).max())
        v0 = cand[int(np.argmin(qv_vals))]
        x = np.array([u0, v0])
        # one Newton step on the full system, kept only if it does not increase the residual
        F = np.array([P(x[0], x[1]), Q(x[0], x[1])])
        J = np.array([[np.polynomial.polynomial.polyval2d(x[0], x[1], dPu),
                       np.polynomial.polynomial.polyval2d(x[0], x[1], dPv)],
                      [np.polynomial.polynomial.polyval2d(x[0], x[1], dQu),
                       np.polynomial.polynomial.polyval2d(x[0], x[1], dQv)]])
        try:
            step = np.linalg.solve(J, F)
            y = x - step
            Fy = np.array([P(y[0], y[1]), Q(y[0], y[1])])
            if np.all(np.isfinite(y)) and np.abs(Fy).max() <= np.abs(F).max():
                x, F = y, Fy
        except np.linalg.LinAlgError:
            pass
        rel = max(abs(F[0]) / max(P.scale(x[0], x[1]), np.abs(P.c).max()),
                  abs(F[1]) / max(Q.scale(x[0], x[1]), np.abs(Q.c).max()))
        if rel <= 1e-6:
            pts.append(x)
            mults.append(int(mult))
            resid = max(resid, rel)
    return _cluster_points(pts, mults, resid)


def _cluster_points(pts, mults, resid) -> Solutions:
    out_p, out_m = [], []
    for x, m in zip(pts, mults):
        for k, y in enumerate(out_p):
            if np.max(np.abs(x - y)) <= CLUSTER_TOL * (1 + np.max(np.abs(y))):
                out_m[k] += m
                break
        else:
            out_p.append(x)
            out_m.append(m)
    arr = np.array(out_p, dtype=complex).reshape(-1, 2)
    return Solutions(arr, np.array(out_m, dtype=int), resid)


def solve_system(polys: list[MultiPoly], rng: random.Random) -> Solutions:
    """Affine solutions of two exact polynomials in two variables, with multiplicity."""
    for _ in range(MAX_DEGENERATE):
        changed, (a, b) = _coordinate_change(polys, rng)
        try:
            sol = _solve_system(_NumPoly2(changed[0]), _NumPoly2(changed[1]), rng)
        except _DegenerateResultant:
            continue
        ca, cb = complex(a), complex(b)
        u, v = sol.points[:, 0], sol.points[:, 1]
        sol.points = np.stack([u + ca * v, cb * u + v], axis=1)
        return sol
    raise EliminationError(f"elimination degenerate after {MAX_DEGENERATE} attempts")


def _require_plane_polynomial(f: AffineMap):
    if f.dim != 2 or f.nvars != 2:
        raise ValueError("elimination is implemented for maps of C²")
    if not f.is_polynomial():
        raise ValueError("elimination needs polynomial components")


def _vote(counts: list[int]) -> int | None:
    best = max(set(counts), key=counts.count)
    return best if counts.count(best) * 2 > len(counts) else None


def topological_degree(f: AffineMap, trials: int = 3, seed: int = 0) -> int:
    """Number of preimages of a generic point (majority over ``trials`` random targets)."""
    _require_plane_polynomial(f)
    rng = random.Random(f"topdeg:{seed}")
    base = f.polys()

    def one_trial() -> int:
        for _ in range(MAX_DEGENERATE):
            while True:
                r, th = 2 * np.sqrt(rng.random()), rng.uniform(0, 2 * np.pi)
                s, ph = 2 * np.sqrt(rng.random()), rng.uniform(0, 2 * np.pi)
                ta = GaussianRational.coerce(complex(r * np.cos(th), r * np.sin(th)))
                tb = GaussianRational.coerce(complex(s * np.cos(ph), s * np.sin(ph)))
                if not (ta.is_zero() and tb.is_zero()):
                    break
            shifted = [base[0] - MultiPoly.constant(2, ta), base[1] - MultiPoly.constant(2, tb)]
            try:
                sol = solve_system(shifted, rng)
            except EliminationError:
                continue
            return len(sol.multiplicities)
        raise EliminationError("no nondegenerate target found")

    counts = [one_trial() for _ in range(trials)]
    if len(set(counts)) == 1:
        return counts[0]
    counts += [one_trial() for _ in range(trials)]
    winner = _vote(counts)
    if winner is None:
        raise EliminationError("topological degree trials disagree", counts)
    return winner


def fixed_point_count(f: AffineMap, n: int, seed: int = 0, holomorphic: bool = False,
                      trials: int = 3) -> FixedPointCount:
    """Solutions of ``f^n(x) = x`` in C² counted with multiplicity.

    With ``holomorphic=True`` (the caller asserts that ``f`` extends to an
    endomorphism of ``P²``) the total ``sum_j d^{jn}`` is reported too.
    """
    if n < 1:
        raise ValueError("period must be >= 1")
    _require_plane_polynomial(f)
    fn = f.iterate(n)
    x = [MultiPoly.variable(2, i) for i in range(2)]
    system = [p - xi for p, xi in zip(fn.polys(), x)]
    rng = random.Random(f"fixcount:{seed}:{n}")
    sols = [solve_system(system, rng) for _ in range(trials)]
    counts = [s.count for s in sols]
    winner = _vote(counts)
    if winner is None:
        raise EliminationError("fixed-point count trials disagree", counts)
    sol = next(s for s in sols if s.count == winner)
    total = None
    if holomorphic:
        d = f.degree()
        total = sum(d ** (j * n) for j in range(3))
    return FixedPointCount(n, winner, total, [tuple(p) for p in sol.points],
                           [int(m) for m in sol.multiplicities])
