"""Monte Carlo experiments on the equilibrium measure.

Correlation decay, the quadratic parameter sweep with its submean test,
the Hölder exponent of the Green function and empirical ball masses.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field

import numpy as np

from ..numerics.grids import Grid
from ..numerics.measure import EmpiricalMeasure
from ..numerics.rng import stream
from .green import GreenParams, green_array
from .maps1d import Poly1C, normalize_monic_centered
from .sampling import default_start, sample_measure

# ---------------------------------------------------------------- observables


def _gauss(cx: float = 0.0, cy: float = 0.0, s: float = 0.5):
    c = complex(cx, cy)
    return lambda z: np.exp(-np.abs(z - c) ** 2 / (2 * s * s))


def _pulse(k: float = 1.0, s: float = 1.0):
    return lambda z: np.cos(k * z.real) * np.exp(-np.abs(z) ** 2 / (2 * s * s))


OBSERVABLES = {
    "re": lambda: (lambda z: z.real),
    "im": lambda: (lambda z: z.imag),
    "abs2": lambda: (lambda z: np.abs(z) ** 2),
    "gauss": _gauss,
    "pulse": _pulse,
}

_SPEC = re.compile(r"^\s*([a-z0-9]+)\s*(?:\(([^)]*)\))?\s*$")


def observable(spec: str):
    """Test function from the built-in dictionary.

    ``"re"``, ``"im"``, ``"abs2"``, ``"gauss(cx, cy, s)"`` and ``"pulse(k, s)"``;
    arguments may be omitted to take the defaults.
    """
    m = _SPEC.match(spec)
    if not m or m.group(1) not in OBSERVABLES:
        raise ValueError(f"unknown test function {spec!r}; choose from {sorted(OBSERVABLES)}")
    args = [float(a) for a in m.group(2).split(",")] if m.group(2) and m.group(2).strip() else []
    try:
        return OBSERVABLES[m.group(1)](*args)
    except TypeError as exc:
        raise ValueError(f"wrong number of arguments in {spec!r}") from exc


# ------------------------------------------------------------------- mixing


@dataclass
class MixingResult:
    correlations: list
    noise_floor: float
    fit_range: list
    exponent: float | None
    exponent_bound: float | None = None
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return dict(self.__dict__)


def mixing_experiment(f, phi: str = "gauss(1,0,0.5)", psi: str | None = None,
                      n_max: int = 10, N: int = 100_000, seed: int = 0, depth: int = 40,
                      threads: int = 1) -> MixingResult:
    """Correlations ``int psi . phi o f^n - int phi int psi`` over a sampled measure.

    The decay exponent is the least-squares slope of ``log|corr_n|`` over
    ``n = 0, 1, ...`` up to the first lag at or below the noise floor
    ``3/sqrt(N)``.  When only lag 0 is above the floor, ``exponent`` is
    ``None`` and ``exponent_bound`` is the slope to the floor at lag 1.
    ``psi`` defaults to ``phi``, making lag 0 the variance.
    """
    psi = phi if psi is None else psi
    mu = sample_measure(f, depth, N, start=default_start(f), seed=seed, threads=threads)
    x = mu.points
    a, b = observable(phi), observable(psi)
    psi_x = b(x)
    mean_psi = float(np.mean(psi_x))
    corr = []
    z = x.copy()
    for _ in range(n_max + 1):
        phi_z = a(z)
        corr.append(float(np.mean(psi_x * phi_z) - mean_psi * np.mean(phi_z)))
        z = f(z)
    floor = 3 / math.sqrt(N)
    last = 0
    while last + 1 <= n_max and abs(corr[last + 1]) > floor:
        last += 1
    exponent = bound = None
    if abs(corr[0]) > floor and last >= 1:
        ns = np.arange(last + 1)
        exponent = float(np.polyfit(ns, np.log(np.abs(corr[: last + 1])), 1)[0])
    elif abs(corr[0]) > floor:
        bound = math.log(floor / abs(corr[0]))
    return MixingResult(corr, floor, [0, last], exponent, bound,
                        {"phi": phi, "psi": psi, "seed": seed, "N": N, "depth": depth})


# ---------------------------------------------------------- parameter sweep


def quadratic_family_green(t, z0=0.0, max_iter: int = 200):
    """``G_t(z0)`` for ``z^2 + t`` at every parameter in ``t`` simultaneously.

    Same escape radius and tail bound as :func:`green_array`, specialised to
    the family: ``R = max(4, 2|t|)`` and tail constant ``8|t|/3``.
    Returns ``(values, errors)``.
    """
    t = np.asarray(t, dtype=complex)
    shape = t.shape
    t = t.ravel()
    z = np.broadcast_to(np.asarray(z0, dtype=complex), shape).ravel().copy()
    R = np.maximum(4.0, 2 * np.abs(t))
    C = 8 * np.abs(t) / 3
    values = np.zeros(len(t))
    errors = np.full(len(t), 2.0 ** -max_iter) * (np.log(R) + C / R)
    steps = np.zeros(len(t))
    live = np.ones(len(t), dtype=bool)
    for n in range(max_iter + 1):
        out = live & (np.abs(z) > R)
        if out.any():
            zo, k = z[out], np.full(int(out.sum()), float(n))
            # a few more steps shrink the tail bound below rounding
            for _ in range(64):
                grow = (np.abs(zo) < 1e100) & (C[out] / np.abs(zo) * 2.0 ** (-k - 1) > 1e-17)
                if not grow.any():
                    break
                zo = np.where(grow, zo * zo + t[out], zo)
                k += grow
            values[out] = 2.0 ** -k * np.log(np.abs(zo))
            errors[out] = 2.0 ** (-k - 1) * C[out] / np.abs(zo)
            steps[out] = k
            live &= ~out
        if not live.any() or n == max_iter:
            break
        z = np.where(live, z * z + t, z)
    return values.reshape(shape), errors.reshape(shape)


def chi_quadratic(t, max_iter: int = 200):
    """``chi(t) = log 2 + G_t(0)`` for the family ``z^2 + t``."""
    return math.log(2) + quadratic_family_green(t, 0.0, max_iter)[0]


@dataclass
class SweepGrid:
    grid: Grid
    t: np.ndarray
    chi: np.ndarray
    green0: np.ndarray
    spacing: tuple
    submean_fraction: float | None = None
    submean_failures: list = field(default_factory=list)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t_re", "t_im", "chi"])
            for tv, c in zip(self.t.ravel(), self.chi.ravel()):
                w.writerow([repr(float(tv.real)), repr(float(tv.imag)), repr(float(c))])

    def to_json(self) -> dict:
        return {"grid": self.grid.to_dict(), "spacing": list(self.spacing),
                "submean_fraction": self.submean_fraction,
                "submean_failures": self.submean_failures,
                "chi_min": float(np.min(self.chi)), "chi_max": float(np.max(self.chi))}


def parameter_sweep(grid: Grid | str, circle_points: int = 16, tol: float = 1e-3,
                    max_iter: int = 200) -> SweepGrid:
    """``chi(t)`` on a parameter grid plus the discrete submean test.

    At each interior node the mean of ``chi`` over ``circle_points`` points
    on the circle of radius one grid step (evaluated directly, not
    interpolated) is compared with ``chi`` at the centre minus ``tol``.
    """
    if isinstance(grid, str):
        grid = Grid.parse(grid)
    t = grid.points()
    if np.max(np.abs(t)) > 10 + 1e-12:
        raise ValueError("parameter grid must lie within |t| <= 10")
    g0 = quadratic_family_green(t, 0.0, max_iter)[0]
    chi = math.log(2) + g0
    h = min(grid.spacing)
    inner = t[1:-1, 1:-1]
    theta = 2 * np.pi * (np.arange(circle_points) + 0.5) / circle_points
    ring = inner[..., None] + h * np.exp(1j * theta)
    means = chi_quadratic(ring, max_iter).mean(axis=-1)
    ok = means >= chi[1:-1, 1:-1] - tol
    bad = np.argwhere(~ok)
    failures = [[float(inner[i, j].real), float(inner[i, j].imag)] for i, j in bad[:50]]
    frac = float(ok.mean()) if ok.size else None
    return SweepGrid(grid, t, chi, g0, grid.spacing, frac, failures)


# ------------------------------------------------------------------- Hölder


@dataclass
class HolderEstimate:
    alpha: float
    scales: list
    max_increments: list
    pairs: int
    bound: float | None = None

    def to_json(self) -> dict:
        return dict(self.__dict__)


def holder_estimate(f: Poly1C, pair_count: int = 4000, seed: int = 0, scales=None,
                    directions: int = 8, params: GreenParams | None = None,
                    chi_top: float | None = None) -> HolderEstimate:
    """Hölder exponent of the Green function across the Julia set.

    Pairs ``(x, x + delta e^{i theta})`` are formed with ``x`` sampled from
    the equilibrium measure; for each scale ``delta`` the largest increment
    ``|G(y) - G(x)|`` is recorded and ``alpha`` is the log-log slope of
    those maxima against ``delta``.  Given ``chi_top`` the bound
    ``log d / chi_top`` is reported alongside.
    """
    g, _ = normalize_monic_centered(f)
    if scales is None:
        scales = np.logspace(-2, -5, 7)
    scales = np.asarray(scales, dtype=float)
    x = sample_measure(g, 40, pair_count, start=default_start(g), seed=seed).points
    gx = green_array(g, x, params)[0]
    rs = stream(seed, 1)
    maxima = []
    for delta in scales:
        phase = rs.uniform(len(x)) * 2 * np.pi
        theta = phase[:, None] + 2 * np.pi * np.arange(directions)[None, :] / directions
        y = x[:, None] + delta * np.exp(1j * theta)
        gy = green_array(g, y, params)[0]
        maxima.append(float(np.max(np.abs(gy - gx[:, None]))))
    alpha = float(np.polyfit(np.log(scales), np.log(maxima), 1)[0])
    bound = math.log(g.degree) / chi_top if chi_top else None
    return HolderEstimate(alpha, scales.tolist(), maxima, pair_count * directions * len(scales), bound)


# ---------------------------------------------------------------- ball mass


@dataclass
class BallMassTable:
    alpha: float
    radii: list
    max_mass: list
    ratios: list
    excluded_radii: list
    growth: float
    bounded: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def ball_mass_check(f, measure: EmpiricalMeasure, alpha: float, radii=None, centers: int = 256,
                    min_count: int = 10, seed: int = 0, growth_limit: float = 10.0) -> BallMassTable:
    """``max_p mu(B(p, r)) / r^alpha`` over sample centres at dyadic radii.

    A radius is excluded when its largest ball holds fewer than
    ``min_count`` samples: below that the empirical mass resolves nothing.
    ``bounded`` is false when the ratio varies by more than ``growth_limit``
    across the remaining radii.
    """
    if radii is None:
        radii = 2.0 ** -np.arange(1, 13)
    radii = np.sort(np.asarray(radii, dtype=float))[::-1]
    pts, w = measure.points, measure.weights
    rs = stream(seed, 2)
    idx = rs.choice(len(pts), min(centers, len(pts)))
    # cumulative weight by distance from each centre, so every radius is a lookup
    order_d, cum_w = [], []
    for p in pts[idx]:
        d = np.abs(pts - p)
        o = np.argsort(d)
        order_d.append(d[o])
        cum_w.append(np.cumsum(w[o]))
    used, masses, ratios, excluded = [], [], [], []
    for r in radii:
        k = np.array([np.searchsorted(d, r, side="right") for d in order_d])
        if k.max() < min_count:
            excluded.append(float(r))
            continue
        m = float(max(cw[j - 1] for cw, j in zip(cum_w, k) if j > 0))
        used.append(float(r))
        masses.append(m)
        ratios.append(m / r ** alpha)
    growth = float(max(ratios) / min(ratios)) if ratios else math.nan
    return BallMassTable(float(alpha), used, masses, ratios, excluded, growth,
                         bool(ratios) and growth <= growth_limit)
