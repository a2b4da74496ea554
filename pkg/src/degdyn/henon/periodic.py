"""Fixed and periodic points of Hénon maps with their 2x2 multiplier spectra."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..numerics.rng import stream
from ..numerics.roots import roots
from .green import _constants
from .maps import HenonMap

SEED_GRID = 20
DUPLICATE_TOL = 1e-8
NEWTON_TOL = 1e-12
MAX_NEWTON = 60
UNIT_TOL = 1e-9
PERIOD_GUARD = 8


@dataclass
class HenonPeriodicPoint:
    period: int
    point: tuple
    multiplier_matrix: np.ndarray
    eigenvalues: tuple
    type: str
    residual: float

    @property
    def determinant(self) -> complex:
        return complex(np.linalg.det(self.multiplier_matrix))

    def to_json(self) -> dict:
        c = lambda x: [complex(x).real, complex(x).imag]  # noqa: E731
        return {"period": self.period, "point": [c(self.point[0]), c(self.point[1])],
                "multiplier_matrix": [[c(v) for v in row] for row in self.multiplier_matrix],
                "eigenvalues": [c(v) for v in self.eigenvalues], "type": self.type,
                "residual": self.residual}


@dataclass
class HenonPeriodicPoints:
    period: int
    points: list
    expected: int
    method: str
    failed_seeds: int = 0
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"period": self.period, "expected": self.expected, "found": len(self.points),
                "method": self.method, "failed_seeds": self.failed_seeds, "notes": self.notes,
                "points": [p.to_json() for p in self.points]}


def _classify(ev) -> str:
    a, b = sorted(abs(complex(e)) for e in ev)
    if a < 1 - UNIT_TOL and b > 1 + UNIT_TOL:
        return "saddle"
    if b < 1 - UNIT_TOL:
        return "attracting"
    if a > 1 + UNIT_TOL:
        return "repelling"
    return "indifferent"


def _point(h: HenonMap, z: complex, w: complex, n: int) -> HenonPeriodicPoint:
    J = np.eye(2, dtype=complex)
    zz, ww = complex(z), complex(w)
    for _ in range(n):
        J = h.jacobian(np.array(zz), np.array(ww)) @ J
        zz, ww = h(zz, ww)
    res = float(abs(zz - z) + abs(ww - w))
    ev = tuple(complex(e) for e in np.linalg.eigvals(J))
    return HenonPeriodicPoint(n, (complex(z), complex(w)), J, ev, _classify(ev), res)


def _newton(h: HenonMap, z: np.ndarray, w: np.ndarray, n: int):
    """Vectorized Newton on ``h^n(x) - x``; returns points and a convergence mask."""
    ok = np.zeros(len(z), dtype=bool)
    live = np.ones(len(z), dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(MAX_NEWTON):
            zi, wi = z[live], w[live]
            J = np.broadcast_to(np.eye(2, dtype=complex), zi.shape + (2, 2)).copy()
            zz, ww = zi.copy(), wi.copy()
            for _ in range(n):
                J = h.jacobian(zz, ww) @ J
                zz, ww = h(zz, ww)
            F = np.stack([zz - zi, ww - wi], axis=-1)
            M = J - np.eye(2)
            det = M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
            dz = (M[:, 1, 1] * F[:, 0] - M[:, 0, 1] * F[:, 1]) / det
            dw = (-M[:, 1, 0] * F[:, 0] + M[:, 0, 0] * F[:, 1]) / det
            good = np.isfinite(dz) & np.isfinite(dw)
            idx = np.nonzero(live)[0]
            z[idx[good]] -= dz[good]
            w[idx[good]] -= dw[good]
            step = np.abs(dz) + np.abs(dw)
            scale = 1 + np.abs(z[idx]) + np.abs(w[idx])
            done = good & (step <= NEWTON_TOL * scale)
            ok[idx[done]] = True
            dead = ~good | ~(np.abs(z[idx]) < 1e8)
            live[idx[done | dead]] = False
            if not live.any():
                break
    return z, w, ok


def _dedupe(pts):
    kept = []
    for z, w in pts:
        if all(abs(z - a) + abs(w - b) > DUPLICATE_TOL * (1 + abs(a) + abs(b)) for a, b in kept):
            kept.append((z, w))
    return kept


def fixed_points_henon(h: HenonMap, period: int = 1, seed: int = 0,
                       grid: int = SEED_GRID) -> HenonPeriodicPoints:
    """Points of period dividing ``period`` (``h^n(x) = x``), ``d^n`` of them with multiplicity.

    A single generator at period 1 is solved in closed form: ``w = z`` and
    ``p(z) - (1 + a) z = 0``.  Otherwise Newton runs from a ``grid x grid``
    seed grid for ``z`` on the square ``|Re|, |Im| <= R`` (``R`` the escape
    radius) with seeded random second coordinates in the same square.
    """
    if period < 1:
        raise ValueError("period must be >= 1")
    if period > PERIOD_GUARD:
        raise ValueError(f"period {period} exceeds the guard {PERIOD_GUARD}")
    expected = h.degree ** period
    if period == 1 and len(h.generators) == 1:
        g = h.generators[0]
        c = g.p.coeffs.astype(complex).copy()
        c[1] -= 1 + g.a
        rs = roots(c)
        out = [_point(h, z, z, 1) for z in rs.roots]
        res = HenonPeriodicPoints(1, out, expected, "closed form")
        if int(np.sum(rs.multiplicities)) != expected:
            res.notes.append("root count differs from the degree")
        return res
    R = _constants(h).R
    xs = np.linspace(-R, R, grid)
    Z = (xs[None, :] + 1j * xs[:, None]).ravel()
    rs = stream(seed, 0)
    W = rs.uniform(Z.shape, -R, R) + 1j * rs.uniform(Z.shape, -R, R)
    z, w, ok = _newton(h, Z.copy(), W, period)
    pts = _dedupe([(complex(a), complex(b)) for a, b in zip(z[ok], w[ok])])
    out = [_point(h, a, b, period) for a, b in pts]
    res = HenonPeriodicPoints(period, out, expected, "newton from seed grid",
                              failed_seeds=int((~ok).sum()))
    if len(out) < expected:
        res.notes.append(f"found {len(out)} of {expected} points (seed grid coverage)")
    return res
