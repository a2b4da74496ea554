"""Lyapunov exponents: Birkhoff averages, the critical-point formula and the topological exponent."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..numerics.measure import EmpiricalMeasure
from .green import GreenParams, escape_radius, green_array
from .maps1d import Poly1C, RatMap1C, normalize_monic_centered
from .sampling import default_start, sample_measure

CRITICAL_EXCLUSION = 1e-12
EXCLUDED_WARN_FRACTION = 0.01


@dataclass
class LyapunovReport:
    chi_birkhoff: float | None = None
    stderr: float | None = None
    chi_critical: float | None = None
    chi_top_estimate: float | None = None
    method: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _log_derivative(f, z: np.ndarray) -> np.ndarray:
    if isinstance(f, RatMap1C):
        with np.errstate(divide="ignore"):
            return np.log(f.spherical_derivative(z))
    with np.errstate(divide="ignore"):
        return np.log(np.abs(f.derivative(z)))


def depth_bias(f: Poly1C, depth: int, start: complex, params: GreenParams | None = None) -> float:
    """Exact gap between the mean of ``log|f'|`` under ``d^{-n} (f^n)^* delta_a`` and ``chi``.

    For a monic polynomial the preimages ``z`` of ``a`` satisfy
    ``sum log|c - z| = log|f^n(c) - a|``, so the gap is
    ``sum_c (d^{-n} log|f^n(c) - a| - G(c))``.  Computed on the monic-centered conjugate.
    """
    g, A = normalize_monic_centered(f)
    a = A(start)
    crit = g.critical_points()
    G = green_array(g, crit, params)[0]
    d = g.degree
    total = 0.0
    for c, gc in zip(crit, G):
        z = complex(c)
        done = False
        for k in range(depth):
            z = complex(g(z))
            if abs(z) > 1e100:
                # escaped: the remaining discrepancy is below the Green tail bound
                done = True
                break
        if not done:
            delta = abs(z - a)
            total += (math.log(delta) if delta > 0 else -math.inf) / d ** depth - gc
    return float(abs(total))


def lyapunov_birkhoff(f: Poly1C | RatMap1C, measure: EmpiricalMeasure) -> LyapunovReport:
    """Weighted mean of ``log|f'|`` over the samples, with its standard error.

    Samples within ``1e-12`` of a critical point are dropped and counted.
    Rational maps use the spherical derivative.  For polynomial samples
    whose provenance records the depth and start point, the exact
    finite-depth bias (:func:`depth_bias`) is added in quadrature to the
    statistical error.
    """
    z = measure.points
    crit = f.critical_points()
    keep = np.ones(len(z), dtype=bool)
    if len(crit):
        dist = np.min(np.abs(z[:, None] - crit[None, :]), axis=1)
        keep = dist > CRITICAL_EXCLUSION
    excluded = int((~keep).sum())
    if excluded > EXCLUDED_WARN_FRACTION * len(z):
        warnings.warn(f"{excluded} of {len(z)} samples lie on the critical set", RuntimeWarning,
                      stacklevel=2)
    vals = _log_derivative(f, z[keep])
    w = measure.weights[keep]
    w = w / w.sum()
    mean = float(np.sum(w * vals))
    var = float(np.sum(w * (vals - mean) ** 2))
    n_eff = 1.0 / float(np.sum(w * w))
    stat = math.sqrt(var / n_eff)
    bias = 0.0
    prov = measure.provenance
    if isinstance(f, Poly1C) and "depth" in prov and "start" in prov:
        bias = depth_bias(f, int(prov["depth"]), complex(*prov["start"]))
    return LyapunovReport(chi_birkhoff=mean, stderr=math.hypot(stat, bias),
                          method={"birkhoff_samples": int(keep.sum()), "excluded": excluded,
                                  "statistical_error": stat, "depth_bias": bias})


def lyapunov_critical(f: Poly1C, params: GreenParams | None = None) -> float:
    """``log d + sum_c G(c)`` over the critical points of the monic-centered conjugate."""
    g, _ = normalize_monic_centered(f) if not f.is_monic() else (f, None)
    crit = g.critical_points()
    vals = green_array(g, crit, params)[0]
    return math.log(g.degree) + float(np.sum(vals))


def dimension_estimate(f: Poly1C, params: GreenParams | None = None) -> float:
    """``log d / chi`` with ``chi`` from the critical-point formula."""
    return math.log(f.degree) / lyapunov_critical(f, params)


def _log1p_sq(z):
    az = np.abs(z)
    return np.where(az > 1e150, 2 * np.log(az), np.log1p(az ** 2))


def _spherical_log_growth(f, z0: np.ndarray, n: int) -> np.ndarray:
    """``log`` of the spherical derivative of ``f^n`` at each start point.

    Summed one step at a time so escaping orbits give ``-inf`` instead of ``nan``.
    """
    z = z0.astype(complex)
    acc = np.zeros(len(z))
    with np.errstate(all="ignore"):
        for _ in range(n):
            fz = f(z)
            acc = acc + np.log(np.abs(f.derivative(z))) + _log1p_sq(z) - _log1p_sq(fz)
            z = fz
    acc[~np.isfinite(acc)] = -np.inf
    return acc


def chi_top_estimate(f: Poly1C | RatMap1C, n_start: int = 4, n_max: int = 64, grid: int = 201,
                     zoom_rounds: int = 3, tol: float = 1e-2, radius: float | None = None,
                     julia_seeds: int = 1024) -> dict:
    """``max_x n^{-1} log ||D f^n(x)||`` in the spherical metric, doubling ``n`` until stable.

    The maximization runs on a square grid of half-width ``radius`` (the
    escape radius by default) together with ``julia_seeds`` backward-orbit
    samples, refined by zooming around the best points.
    """
    R = radius if radius is not None else (escape_radius(f) if isinstance(f, Poly1C) else 2.0)
    xs = np.linspace(-R, R, grid)
    base = (xs[None, :] + 1j * xs[:, None]).ravel()
    if julia_seeds:
        base = np.concatenate([base, sample_measure(f, 30, julia_seeds, start=default_start(f)).points])

    def best(n: int) -> float:
        pts = base
        h = xs[1] - xs[0]
        top = -np.inf
        for _ in range(zoom_rounds + 1):
            vals = _spherical_log_growth(f, pts, n) / n
            order = np.argsort(vals)[::-1][:8]
            top = max(top, float(vals[order[0]]))
            local = np.linspace(-h, h, 21)
            off = (local[None, :] + 1j * local[:, None]).ravel()
            pts = (pts[order][:, None] + off[None, :]).ravel()
            h /= 10
        return top

    history = []
    n = n_start
    prev = best(n)
    if not math.isfinite(prev):
        return {"value": prev, "n": n, "history": [(n, prev)], "converged": False}
    history.append((n, prev))
    while 2 * n <= n_max:
        n *= 2
        cur = best(n)
        history.append((n, cur))
        if not math.isfinite(cur):
            break
        if abs(cur - prev) <= tol:
            return {"value": cur, "n": n, "history": history, "converged": True}
        prev = cur
    return {"value": prev, "n": n, "history": history, "converged": False}


def lyapunov(f: Poly1C | RatMap1C, measure: EmpiricalMeasure | None = None,
             params: GreenParams | None = None, with_top: bool = False) -> LyapunovReport:
    """Combined report from whichever routes apply."""
    rep = LyapunovReport()
    if measure is not None:
        rep = lyapunov_birkhoff(f, measure)
    if isinstance(f, Poly1C):
        rep.chi_critical = lyapunov_critical(f, params)
        rep.method["critical"] = "log d + sum of G over critical points"
    if with_top:
        top = chi_top_estimate(f)
        rep.chi_top_estimate = top["value"]
        rep.method["chi_top_n"] = top["n"]
    return rep
