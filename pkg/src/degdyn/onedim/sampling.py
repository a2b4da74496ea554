"""Backward-iteration sampling of the equilibrium measure and preimage trees."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..numerics.measure import EmpiricalMeasure, PotentialMeasure, measure_distance
from ..numerics.rng import stream
from ..numerics.roots import roots_batch
from .exceptional import exceptional_points
from .green import equilibrium_potential
from .maps1d import Poly1C, RatMap1C

CHUNK = 8192
CRITICAL_VALUE_TOL = 1e-12
PERTURBATION = 1e-10
MAX_RETRIES = 5
TREE_GUARD = 1 << 14
SLACK = 1.2


class ExceptionalStartError(ValueError):
    """Backward orbits of an exceptional point do not equidistribute."""

    def __init__(self, point):
        super().__init__(f"start point {point} is exceptional; its preimages do not equidistribute")
        self.point = point


def _critical_values(f) -> np.ndarray:
    cv = f(f.critical_points())
    return cv[np.isfinite(cv)]


def _fiber_coeffs(f, w: np.ndarray) -> np.ndarray:
    """Rows of ascending coefficients of ``f(z) - w`` (times the denominator)."""
    if isinstance(f, Poly1C):
        c = np.broadcast_to(f.coeffs, (len(w), f.degree + 1)).copy()
        c[:, 0] -= w
        return c
    return f.num[None, :] - w[:, None] * f.den[None, :]


def _solve_fibers(f, w: np.ndarray, rs, counters: dict, seed: int) -> np.ndarray:
    """All ``d`` preimages of each target, perturbing near critical values and on failure."""
    w = w.copy()
    cv = _critical_values(f)
    if len(cv):
        near = np.min(np.abs(w[:, None] - cv[None, :]), axis=1) < CRITICAL_VALUE_TOL * (1 + np.abs(w))
        if near.any():
            w[near] += PERTURBATION * rs.unit_circle(int(near.sum()))
            counters["perturbed"] += int(near.sum())
    out = np.empty((len(w), f.degree), dtype=complex)
    todo = np.arange(len(w))
    for attempt in range(MAX_RETRIES + 1):
        c = _fiber_coeffs(f, w[todo])
        if isinstance(f, RatMap1C):
            lead = np.abs(c[:, -1]) <= 1e-14 * np.max(np.abs(c), axis=1)
        else:
            lead = np.zeros(len(todo), dtype=bool)
        z, ok = roots_batch(np.where(lead[:, None], 1, c), seed=seed)
        ok &= ~lead
        out[todo[ok]] = z[ok]
        todo = todo[~ok]
        if not len(todo):
            break
        if attempt == MAX_RETRIES:
            raise ArithmeticError(f"root finding failed for {len(todo)} fibers")
        counters["resampled"] += len(todo)
        w[todo] += PERTURBATION * rs.unit_circle(len(todo))
    return out


def _sample_chunk(f, depth: int, size: int, start: complex, seed: int, index: int):
    rs = stream(seed, index)
    counters = {"perturbed": 0, "resampled": 0}
    w = np.full(size, complex(start))
    first = None
    rows = np.arange(size)
    for step in range(depth):
        pre = _solve_fibers(f, w, rs, counters, seed)
        branch = rs.choice(f.degree, size)
        if step == 0:
            first = branch
        w = pre[rows, branch]
    return w, first, counters


@dataclass
class SampleStats:
    perturbed: int
    resampled: int


def sample_measure(f: Poly1C | RatMap1C, depth: int, count: int, start: complex = 0.5 + 0.5j,
                   seed: int = 0, threads: int = 1, return_branches: bool = False):
    """``count`` endpoints of independent random inverse orbits of length ``depth``.

    At every step one of the ``d`` preimages (counted with multiplicity) is
    chosen uniformly.  Work is split into fixed chunks, each with its own
    stream ``(seed, chunk index)``, so the output does not depend on ``threads``.
    """
    if depth < 1 or count < 1:
        raise ValueError("depth and count must be >= 1")
    start = complex(start)
    if exceptional_points(f).contains(start):
        raise ExceptionalStartError(start)
    sizes = [min(CHUNK, count - s) for s in range(0, count, CHUNK)]
    jobs = [(f, depth, n, start, seed, i) for i, n in enumerate(sizes)]
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(lambda a: _sample_chunk(*a), jobs))
    else:
        results = [_sample_chunk(*a) for a in jobs]
    pts = np.concatenate([r[0] for r in results])
    stats = SampleStats(sum(r[2]["perturbed"] for r in results), sum(r[2]["resampled"] for r in results))
    mu = EmpiricalMeasure(pts, provenance={"seed": seed, "depth": depth, "start": [start.real, start.imag],
                                           "count": count, "perturbed": stats.perturbed,
                                           "resampled": stats.resampled})
    if return_branches:
        return mu, np.concatenate([r[1] for r in results])
    return mu


def preimage_tree(f: Poly1C | RatMap1C, a: complex, n: int) -> np.ndarray:
    """All ``d^n`` points of ``f^{-n}(a)``, repeated by multiplicity."""
    if f.degree ** n > TREE_GUARD:
        raise ValueError(f"preimage tree of size {f.degree}^{n} exceeds the guard {TREE_GUARD}")
    w = np.array([complex(a)])
    counters = {"perturbed": 0, "resampled": 0}
    rs = stream(0, 0)
    for _ in range(n):
        w = _solve_fibers(f, w, rs, counters, 0).ravel()
    return w


def exact_reference(f: Poly1C, support: int = 2048, seed: int = 0) -> PotentialMeasure:
    """Equilibrium measure of a polynomial through its potential ``G - log|c|/(d-1)``."""
    pts = sample_measure(f, 30, support, start=default_start(f), seed=seed).points
    return PotentialMeasure(equilibrium_potential(f), pts)


def sampled_reference(f, count: int = 100_000, depth: int = 40, seed: int = 0, threads: int = 1):
    return sample_measure(f, depth, count, start=default_start(f), seed=seed, threads=threads)


def default_start(f) -> complex:
    E = exceptional_points(f)
    for z in (0.5 + 0.5j, 1.25 - 0.75j, 0.1 + 2j):
        if not E.contains(z):
            return z
    return 3.7 + 1.3j


@dataclass
class EquidistributionResult:
    depths: list
    distances: list
    monotone_ok: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def preimage_equidistribution(f: Poly1C | RatMap1C, a: complex, n_list, reference=None,
                              seed: int = 0) -> EquidistributionResult:
    """Distance from ``d^{-n} (f^n)^* delta_a`` to the equilibrium measure for each ``n``.

    ``monotone_ok`` allows each term to exceed its predecessor by 20%.
    """
    if exceptional_points(f).contains(complex(a)):
        raise ExceptionalStartError(complex(a))
    ref = reference if reference is not None else sampled_reference(f, seed=seed)
    ns = sorted(int(n) for n in n_list)
    dists = []
    for n in ns:
        nu = EmpiricalMeasure(preimage_tree(f, a, n), provenance={"tree_root": [complex(a).real, complex(a).imag], "tree_depth": n})
        dists.append(measure_distance(nu, ref))
    mono = all(b <= SLACK * x for x, b in zip(dists, dists[1:]))
    return EquidistributionResult(ns, dists, mono)


def first_branch_masses(branches: np.ndarray, degree: int) -> np.ndarray:
    """Fraction of samples in each first inverse branch."""
    return np.bincount(branches, minlength=degree) / len(branches)


def ks_arcsine(points: np.ndarray) -> float:
    """Kolmogorov–Smirnov distance of real parts to the arcsine law on ``[-2, 2]``."""
    x = np.sort(np.clip(np.asarray(points).real, -2, 2))
    n = len(x)
    cdf = 0.5 + np.arcsin(x / 2) / math.pi
    hi = np.arange(1, n + 1) / n
    lo = np.arange(n) / n
    return float(max(np.max(hi - cdf), np.max(cdf - lo)))
