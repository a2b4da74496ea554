"""Degree reports: dynamical-degree estimates, stability, concavity and entropy bound."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from ..mapalg.maps import BiProjMap, ProjMap
from .engine import exact_degrees, modular_degrees

CONCAVITY_TOL = 1e-9


@dataclass
class Estimate:
    value: float
    err: float
    method: str = ""


@dataclass
class DegreeReport:
    model: str  # "P^k" or "P1xP1"
    dim: int
    degrees: list
    lambda1: Estimate
    stable: bool
    lambdas: list[float]
    entropy_bound: float
    dominant_l: int | None
    concavity_ok: bool
    method: str
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        d["lambda1"] = {"value": self.lambda1.value, "err": self.lambda1.err,
                        "method": self.lambda1.method}
        return d


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------

def ratio_estimate(seq: Sequence[float]) -> Estimate:
    """Growth rate of a positive sequence from its last terms.

    Compares the lag-1 ratio ``d_N/d_{N-1}`` with the lag-2 root
    ``(d_N/d_{N-2})^{1/2}``; each carries the change from the previous index
    as its error bar, and the one with the smaller bar is returned.  The
    lag-2 form handles sequences whose ratios alternate (period-two growth).
    """
    s = [float(x) for x in seq]
    n = len(s)
    if n == 0:
        raise ValueError("empty sequence")
    if n == 1:
        return Estimate(s[0], math.inf, "d1")
    if n == 2:
        return Estimate(s[1] / s[0], math.inf, "ratio")
    cands = []
    r1 = s[-1] / s[-2]
    cands.append(Estimate(r1, abs(r1 - s[-2] / s[-3]), "ratio"))
    if n >= 4:
        r2 = math.sqrt(s[-1] / s[-3])
        cands.append(Estimate(r2, abs(r2 - math.sqrt(s[-2] / s[-4])), "ratio-lag2"))
    return min(cands, key=lambda e: e.err)


def spectral_radius(m) -> float:
    a = np.asarray(m, dtype=float)
    if a.shape == (2, 2):
        tr = a[0, 0] + a[1, 1]
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        disc = tr * tr - 4 * det
        if disc >= 0:
            r = math.sqrt(disc)
            return max(abs((tr + r) / 2), abs((tr - r) / 2))
        return math.sqrt(det)
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def _matpow_int(m: list[list[int]], n: int) -> list[list[int]]:
    k = len(m)
    result = [[int(i == j) for j in range(k)] for i in range(k)]
    base = [row[:] for row in m]
    while n:
        if n & 1:
            result = _matmul(result, base)
        base = _matmul(base, base)
        n >>= 1
    return result


def _matmul(a, b):
    return [[sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def is_stable(degrees: list, model: str) -> bool:
    if model == "P^k":
        d1 = degrees[0]
        return all(d == d1 ** (n + 1) for n, d in enumerate(degrees))
    b1 = degrees[0]
    return all(m == _matpow_int(b1, n + 1) for n, m in enumerate(degrees))


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

def concavity_ok(lambdas: Sequence[float], tol: float = CONCAVITY_TOL) -> bool:
    """``lambda_{l+1} lambda_{l-1} <= lambda_l^2`` for interior ``l`` and every ``lambda_j >= 1``."""
    lam = list(lambdas)
    if any(x < 1 - tol for x in lam):
        return False
    return all(lam[l + 1] * lam[l - 1] <= lam[l] ** 2 * (1 + tol) for l in range(1, len(lam) - 1))


@dataclass
class HyperbolicityVerdict:
    dominant_l: int | None
    entropy_bound: float
    concavity_ok: bool


def hyperbolicity_verdict(lambdas: Sequence[float], tol: float = 1e-9) -> HyperbolicityVerdict:
    """Unique strictly dominant index (if any), ``log max lambda_l`` and the concavity check.

    ``lambdas`` starts with ``lambda_0 = 1``.
    """
    lam = [float(x) for x in lambdas]
    if not lam or abs(lam[0] - 1) > tol:
        raise ValueError("the list must start with lambda_0 = 1")
    top = max(lam)
    winners = [l for l, x in enumerate(lam) if x >= top * (1 - tol)]
    dominant = winners[0] if len(winners) == 1 else None
    return HyperbolicityVerdict(dominant, math.log(top), concavity_ok(lam))


def degree_sequence(f: ProjMap | BiProjMap, N: int, *, method: str = "modular",
                    seed: int = 0, trials: int = 2, topological_degree: int | None = None) -> DegreeReport:
    """Degrees of ``f, f^2, ..., f^N`` with a dynamical-degree estimate.

    ``method`` is ``"modular"`` (generic-curve restriction over finite fields)
    or ``"exact"`` (iterated exact composition).  If ``topological_degree``
    is given it becomes the last dynamical degree in ``lambdas``.
    """
    if method == "modular":
        degs = modular_degrees(f, N, trials=trials, seed=seed)
    elif method == "exact":
        degs = exact_degrees(f, N)
    else:
        raise ValueError(f"unknown method {method!r}")
    model = "P^k" if isinstance(f, ProjMap) else "P1xP1"
    dim = f.dim if isinstance(f, ProjMap) else 2
    stable = is_stable(degs, model)
    notes = []
    if model == "P^k":
        if stable:
            lam1 = Estimate(float(degs[0]), 0.0, "stable: d_1")
        else:
            lam1 = ratio_estimate(degs)
    else:
        if stable:
            lam1 = Estimate(spectral_radius(degs[0]), 0.0, "stable: spectral radius of B_1")
        else:
            norms = [sum(map(sum, m)) for m in degs]
            lam1 = ratio_estimate(norms)
            lam1.method += " of |B_n|"
            notes.append(f"spectral radius of B_N^(1/N) = {spectral_radius(degs[-1]) ** (1 / N):.9g}")
    lambdas = [1.0, lam1.value]
    if dim >= 2 and topological_degree is not None:
        if dim > 2:
            notes.append("intermediate dynamical degrees are not computed in dimension > 2")
        else:
            lambdas.append(float(topological_degree))
    v = hyperbolicity_verdict(lambdas)
    return DegreeReport(model, dim, degs, lam1, stable, lambdas, v.entropy_bound, v.dominant_l,
                        v.concavity_ok, method, notes)


def submultiplicative(degrees: Sequence[int]) -> bool:
    """``d_{n+m} <= d_n d_m`` for every pair with ``n + m <= N`` (1-based)."""
    d = list(degrees)
    N = len(d)
    return all(d[n + m - 1] <= d[n - 1] * d[m - 1]
               for n in range(1, N + 1) for m in range(1, N + 1 - n))
