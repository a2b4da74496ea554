"""Simultaneous polynomial root finding (Aberth–Ehrlich) with Newton polish."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

MAX_SWEEPS = 200
_EPS = np.finfo(float).eps


@dataclass
class RootSet:
    """Roots grouped into clusters; ``multiplicities`` sum to the degree."""

    roots: np.ndarray
    multiplicities: np.ndarray
    residual: float
    backward_error: float
    converged: bool
    sweeps: int
    raw: np.ndarray = field(repr=False, default=None)

    @property
    def degree(self) -> int:
        return int(self.multiplicities.sum())

    def __len__(self) -> int:
        return len(self.roots)

    def with_multiplicity(self) -> np.ndarray:
        return np.repeat(self.roots, self.multiplicities)


def _coeffs(p) -> np.ndarray:
    c = np.asarray(getattr(p, "coeffs", p), dtype=complex)
    if c.ndim != 1 or len(c) < 2:
        raise ValueError("need a polynomial of degree >= 1 (ascending coefficients)")
    return c


def cauchy_bound(c: np.ndarray) -> float:
    """Radius containing every root of ``sum c[k] z^k`` (ascending)."""
    lead = abs(c[-1])
    return 1.0 + float(np.max(np.abs(c[:-1]))) / lead


def _horner(c: np.ndarray, z: np.ndarray):
    """Value, derivative and a rounding-error scale of the polynomial at ``z``."""
    p = np.full_like(z, c[-1])
    dp = np.zeros_like(z)
    scale = np.full(z.shape, abs(c[-1]))
    az = np.abs(z)
    for a in c[-2::-1]:
        dp = dp * z + p
        p = p * z + a
        scale = scale * az + abs(a)
    return p, dp, scale


def roots(p, *, seed: int = 0, cluster_tol: float | None = None,
          max_sweeps: int = MAX_SWEEPS) -> RootSet:
    """All complex roots of ``p`` (ascending coefficients or an object with ``coeffs``)."""
    c = _coeffs(p)
    if c[-1] == 0:
        raise ValueError("leading coefficient is zero")
    # exact zero roots from vanishing low-order coefficients
    nz = int(np.argmax(c != 0))
    core = c[nz:]
    d = len(core) - 1
    bound = cauchy_bound(c)
    if d == 0:
        z = np.zeros(0, dtype=complex)
        sweeps, ok = 0, True
    else:
        z, sweeps, ok = _aberth(core, seed, max_sweeps)
        z = _polish(core, z)
    allz = np.concatenate([z, np.zeros(nz, dtype=complex)])
    pv, _, scale = _horner(c, allz)
    residual = float(np.max(np.abs(pv))) if len(allz) else 0.0
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(scale > 0, np.abs(pv) / scale, 0.0)
    backward = float(np.max(rel)) if len(allz) else 0.0
    tol = cluster_tol if cluster_tol is not None else 1e-6 * bound
    centers, mult = cluster(allz, tol)
    return RootSet(centers, mult, residual, backward, ok, sweeps, raw=allz)


def _initial(c: np.ndarray, seed: int) -> np.ndarray:
    """Starting points on circles read off the Newton polygon of ``|c_k|``.

    Each edge of the upper hull of ``(k, log|c_k|)`` from ``k_i`` to ``k_j``
    contributes ``k_j - k_i`` points on a circle whose radius is the edge's
    root-modulus estimate, so widely separated root scales each get starts.
    """
    d = len(c) - 1
    a = np.abs(c)
    ks = np.nonzero(a > 0)[0]
    logs = np.log(a[ks])
    hull: list[int] = []
    for i in range(len(ks)):
        while len(hull) >= 2:
            k1, k2 = hull[-2], hull[-1]
            cross = (ks[k2] - ks[k1]) * (logs[i] - logs[k1]) - (logs[k2] - logs[k1]) * (ks[i] - ks[k1])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    phase = np.random.default_rng(seed).uniform(0, 2 * np.pi)
    out = []
    for h0, h1 in zip(hull, hull[1:]):
        m = int(ks[h1] - ks[h0])
        radius = float(np.exp((logs[h0] - logs[h1]) / m))
        k = np.arange(m)
        out.append(radius * np.exp(1j * (2 * np.pi * k / m + phase + 0.25 + len(out))))
    z = np.concatenate(out)
    assert len(z) == d
    return z


def _aberth(c: np.ndarray, seed: int, max_sweeps: int):
    d = len(c) - 1
    if d == 1:
        return np.array([-c[0] / c[1]]), 0, True
    z = _initial(c, seed)
    active = np.ones(d, dtype=bool)
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        idx = np.nonzero(active)[0]
        if len(idx) == 0:
            break
        za = z[idx]
        p, dp, scale = _horner(c, za)
        small = np.abs(p) <= 4 * _EPS * scale
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            s = _pair_sums(za, z, idx)
            w = ratio / (1 - ratio * s)
        bad = ~np.isfinite(w)
        w[bad] = 0.0
        z[idx] = za - w
        done = small | (np.abs(w) <= 2 * _EPS * np.abs(za)) | bad
        active[idx[done]] = False
    return z, sweeps, not active.any()


def _pair_sums(za: np.ndarray, z: np.ndarray, idx: np.ndarray, block: int = 1024) -> np.ndarray:
    """``sum_{j != k} 1/(z_k - z_j)`` for the active roots, blocked to bound memory."""
    out = np.empty(len(za), dtype=complex)
    for s in range(0, len(za), block):
        zz = za[s:s + block, None]
        diff = zz - z[None, :]
        diff[np.arange(len(zz)), idx[s:s + block]] = np.inf
        out[s:s + block] = (1.0 / diff).sum(axis=1)
    return out


def _polish(c: np.ndarray, z: np.ndarray, steps: int = 2) -> np.ndarray:
    for _ in range(steps):
        p, dp, _ = _horner(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = p / dp
        cand = z - step
        pc, _, _ = _horner(c, cand)
        better = np.isfinite(cand) & (np.abs(pc) < np.abs(p))
        z = np.where(better, cand, z)
    return z


def cluster(z: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Single-linkage clusters of radius ``tol``; returns centroids and sizes."""
    n = len(z)
    if n == 0:
        return z, np.zeros(0, dtype=int)
    order = np.argsort(z.real, kind="stable")
    zs = z[order]
    parent = np.arange(n)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        j = i + 1
        while j < n and zs[j].real - zs[i].real <= tol:
            if abs(zs[j] - zs[i]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
            j += 1
    labels = np.array([find(i) for i in range(n)])
    uniq, inverse, counts = np.unique(labels, return_inverse=True, return_counts=True)
    centers = np.zeros(len(uniq), dtype=complex)
    np.add.at(centers, inverse, zs)
    centers /= counts
    # snap exact-zero clusters so that z^m reports the root 0 exactly
    for k in range(len(uniq)):
        members = zs[inverse == k]
        if np.all(members == 0):
            centers[k] = 0
    return centers, counts


# ---------------------------------------------------------------------------
# batched small-degree solver
# ---------------------------------------------------------------------------

def roots_batch(coeffs: np.ndarray, *, seed: int = 0, max_sweeps: int = MAX_SWEEPS):
    """Roots of many polynomials of one degree.

    ``coeffs`` has shape ``(m, d+1)`` (ascending).  Returns ``(roots, ok)``
    with ``roots`` of shape ``(m, d)``.  Degrees 1 and 2 use closed forms;
    higher degrees run a vectorized Aberth iteration.
    """
    c = np.asarray(coeffs, dtype=complex)
    m, n = c.shape
    d = n - 1
    if d == 1:
        return (-c[:, 0] / c[:, 1])[:, None], np.ones(m, dtype=bool)
    if d == 2:
        a, b, cc = c[:, 2], c[:, 1], c[:, 0]
        disc = np.sqrt(b * b - 4 * a * cc)
        # choose the sign that avoids cancellation
        sgn = np.where((np.conj(b) * disc).real >= 0, 1.0, -1.0)
        q = -0.5 * (b + sgn * disc)
        r1 = q / a
        with np.errstate(divide="ignore", invalid="ignore"):
            r2 = np.where(q != 0, cc / q, 0.0)
        out = np.stack([r1, r2], axis=1)
        out = _polish_batch(c, out, steps=1)
        return out, np.all(np.isfinite(out), axis=1)
    lead = c[:, -1:]
    cn = c / lead
    radius = 1.0 + np.max(np.abs(cn[:, :-1]), axis=1)
    gm = np.abs(cn[:, 0]) ** (1.0 / d)
    radius = np.maximum(np.minimum(radius, np.maximum(gm, 1e-300)), 1e-300)
    phase = np.random.default_rng(seed).uniform(0, 2 * np.pi)
    k = np.arange(d)
    z = radius[:, None] * np.exp(1j * (2 * np.pi * k / d + phase + 0.25))[None, :]
    eye = np.eye(d, dtype=bool)
    for _ in range(max_sweeps):
        p, dp = _horner_batch(cn, z)
        diff = z[:, :, None] - z[:, None, :]
        diff[:, eye] = np.inf
        s = (1.0 / diff).sum(axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            w = ratio / (1 - ratio * s)
        w[~np.isfinite(w)] = 0
        z = z - w
        if np.all(np.abs(w) <= 4 * _EPS * np.maximum(np.abs(z), 1e-300)):
            break
    z = _polish_batch(c, z, steps=1)
    return z, np.all(np.isfinite(z), axis=1)


def _horner_batch(c: np.ndarray, z: np.ndarray):
    p = np.broadcast_to(c[:, -1:], z.shape).copy()
    dp = np.zeros_like(z)
    for j in range(c.shape[1] - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, j:j + 1]
    return p, dp


def _polish_batch(c: np.ndarray, z: np.ndarray, steps: int = 1) -> np.ndarray:
    for _ in range(steps):
        p, dp = _horner_batch(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = z - p / dp
        pc, _ = _horner_batch(c, cand)
        better = np.isfinite(cand) & (np.abs(pc) < np.abs(p))
        z = np.where(better, cand, z)
    return z


# ---------------------------------------------------------------------------
# roots of a function known only through evaluation
# ---------------------------------------------------------------------------

def roots_by_evaluation(newton_ratio: Callable[[np.ndarray], np.ndarray], degree: int,
                        radius: float, *, seed: int = 0, max_sweeps: int = MAX_SWEEPS,
                        tol: float = 1e-14, initial=None) -> tuple[np.ndarray, int, bool]:
    """Aberth iteration for a polynomial given only by ``z -> p(z)/p'(z)``.

    Useful when coefficients are astronomically large (iterates ``f^n``).
    Starts from ``initial`` (``degree`` distinct points) if given, otherwise
    from a circle of the given radius.  Returns ``(roots, sweeps, converged)``.
    """
    if initial is not None:
        z = np.array(initial, dtype=complex)
        if z.shape != (degree,):
            raise ValueError("need one initial point per root")
    else:
        phase = np.random.default_rng(seed).uniform(0, 2 * np.pi)
        k = np.arange(degree)
        z = radius * np.exp(1j * (2 * np.pi * k / degree + phase + 0.25))
    active = np.ones(degree, dtype=bool)
    idx_all = np.arange(degree)
    last = np.full(degree, np.inf)
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        idx = idx_all[active]
        if len(idx) == 0:
            break
        za = z[idx]
        ratio = newton_ratio(za)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = _pair_sums(za, z, idx)
            w = ratio / (1 - ratio * s)
        bad = ~np.isfinite(w)
        # a non-finite correction is not convergence: nudge the point and keep it active
        w[bad] = -1e-3 * np.maximum(np.abs(za[bad]), 1e-3) * np.exp(1j * (sweeps + idx[bad]))
        z[idx] = za - w
        step = np.abs(w)
        # converged, or at the rounding floor: small step that stopped shrinking
        done = ((step <= tol * np.maximum(np.abs(za), 1.0))
                | ((step <= 1e-8 * np.maximum(np.abs(za), 1.0)) & (step >= last[idx]))) & ~bad
        last[idx] = np.where(bad, np.inf, step)
        active[idx[done]] = False
    return z, sweeps, not active.any()
