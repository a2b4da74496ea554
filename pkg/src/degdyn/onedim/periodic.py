"""Periodic points of a polynomial: all roots of ``f^n(z) = z`` with multipliers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..numerics.measure import EmpiricalMeasure, measure_distance
from ..numerics.roots import roots_by_evaluation
from .green import escape_radius
from .maps1d import Poly1C
from .sampling import default_start, preimage_tree, sampled_reference

ROOT_GUARD = 10_000
CLUSTER_STEPS = 8.0
INDIFFERENT_TOL = 1e-9


@dataclass
class PeriodicOrbit:
    period: int
    point: complex
    multiplier: complex
    type: str
    multiplicity: int = 1
    minimal_period: int | None = None

    def to_json(self) -> dict:
        return {"period": self.period, "point": [self.point.real, self.point.imag],
                "multiplier": [self.multiplier.real, self.multiplier.imag], "type": self.type,
                "multiplicity": self.multiplicity, "minimal_period": self.minimal_period}


@dataclass
class PeriodicPoints:
    period: int
    orbits: list
    count: int
    residual: float
    converged: bool
    repelling_fraction: float
    distance: float | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"period": self.period, "count": self.count, "residual": self.residual,
                "converged": self.converged, "repelling_fraction": self.repelling_fraction,
                "distance": self.distance, "notes": self.notes,
                "points": [o.to_json() for o in self.orbits]}


def _orbit_data(f: Poly1C, z: np.ndarray, n: int):
    """``f^n(z)``, ``(f^n)'(z)`` and ``(f^n)'/f^n`` accumulated without overflow.

    Orbits beyond ``1e150`` are frozen; from there on ``z f'/f`` is ``d`` to
    double precision, and ``f^n`` is reported as infinite.
    """
    zk = z.astype(complex)
    D = np.ones_like(zk)
    big = np.zeros(len(zk), dtype=bool)
    d = float(f.degree)
    with np.errstate(all="ignore"):
        r = 1 / zk
        for _ in range(n):
            live = ~big
            D[live] = D[live] * f.derivative(zk[live])
            r[live] = r[live] * f.log_derivative_ratio(zk[live])
            r[big] = r[big] * d
            zk[live] = f(zk[live])
            big |= ~(np.abs(zk) < 1e150)
    zk[big] = np.inf
    D[big] = np.inf
    return zk, D, r


def _newton_ratio(f: Poly1C, n: int):
    def ratio(z):
        zn, D, r = _orbit_data(f, z, n)
        with np.errstate(all="ignore"):
            direct = (zn - z) / (D - 1)
            inv = np.where(np.isinf(zn), 0, 1 / zn)
            scaled = (1 - z * inv) / (r - inv)
        use_direct = np.isfinite(direct) & (np.abs(zn) < 1e150)
        return np.where(use_direct, direct, scaled)
    return ratio


def _cluster(z: np.ndarray, steps: np.ndarray):
    """Merge approximations closer than a few Newton steps.

    A simple root converges to a step at the rounding level, so distinct
    roots stay apart however close they are; the ``m`` approximations of an
    ``m``-fold root keep steps of about ``spread/m`` and are merged.
    """
    rad = np.maximum(CLUSTER_STEPS * np.abs(steps), 1e-13 * (1 + np.abs(z)))
    near = np.abs(z[:, None] - z[None, :]) <= np.maximum(rad[:, None], rad[None, :])
    label = -np.ones(len(z), dtype=int)
    nxt = 0
    for i in range(len(z)):
        if label[i] >= 0:
            continue
        stack, label[i] = [i], nxt
        while stack:
            j = stack.pop()
            for k in np.nonzero(near[j] & (label < 0))[0]:
                label[k] = nxt
                stack.append(k)
        nxt += 1
    centers = np.array([z[label == c].mean() for c in range(nxt)])
    counts = np.bincount(label, minlength=nxt)
    return centers, counts


def _classify(m: complex) -> str:
    a = abs(m)
    if a > 1 + INDIFFERENT_TOL:
        return "repelling"
    if a < 1 - INDIFFERENT_TOL:
        return "attracting"
    return "indifferent"


def _minimal_period(f: Poly1C, z: complex, n: int) -> int:
    w = z
    for m in range(1, n + 1):
        w = complex(f(w))
        if n % m == 0 and abs(w - z) <= 1e-8 * (1 + abs(z)):
            return m
    return n


def periodic_points(f: Poly1C, n: int, seed: int = 0, reference="sampled",
                    max_sweeps: int = 500) -> PeriodicPoints:
    """All ``d^n`` roots of ``f^n(z) - z`` with multiplicity, multipliers and types.

    ``reference`` may be ``"sampled"`` (a fresh sample of the equilibrium
    measure), any measure accepted by :func:`measure_distance`, or ``None``
    to skip the comparison with the repelling points.
    """
    if n < 1:
        raise ValueError("period must be >= 1")
    if not isinstance(f, Poly1C):
        raise TypeError("periodic points are computed for polynomials")
    degree = f.degree ** n
    if degree > ROOT_GUARD:
        raise ValueError(f"degree {degree} of f^n(z) - z exceeds the guard {ROOT_GUARD}")
    ratio = _newton_ratio(f, n)
    # level-n preimages interleave with the period-n points: good starting values
    init = preimage_tree(f, default_start(f), n)
    z, sweeps, ok = roots_by_evaluation(ratio, degree, escape_radius(f), seed=seed,
                                        max_sweeps=max_sweeps, initial=init)
    if not ok:
        z, sweeps, ok = roots_by_evaluation(ratio, degree, escape_radius(f), seed=seed,
                                            max_sweeps=max_sweeps)
    steps = ratio(z)
    resid = float(np.max(np.abs(steps) / (1 + np.abs(z))))
    centers, mult = _cluster(z, steps)
    _, D, _ = _orbit_data(f, centers, n)
    orbits = [PeriodicOrbit(n, complex(c), complex(m), _classify(complex(m)), int(k),
                            _minimal_period(f, complex(c), n))
              for c, m, k in zip(centers, D, mult)]
    count = int(mult.sum())
    rep_mask = np.array([o.type == "repelling" for o in orbits])
    rep_frac = float(mult[rep_mask].sum() / count) if count else 0.0
    out = PeriodicPoints(n, orbits, count, resid, bool(ok), rep_frac)
    if not ok:
        out.notes.append(f"root finder did not converge in {sweeps} sweeps; max step {resid:.2e}")
    if reference is not None and rep_mask.any():
        ref = sampled_reference(f, seed=seed) if isinstance(reference, str) else reference
        nu = EmpiricalMeasure(centers[rep_mask], mult[rep_mask].astype(float),
                              provenance={"periodic": n})
        out.distance = measure_distance(nu, ref)
    return out
