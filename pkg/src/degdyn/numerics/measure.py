"""Weighted point clouds and the probe-potential distance between them."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

N_CIRCLE_PROBES = 16
N_INTERIOR_PROBES = 16
PROBE_SEED = 0x9E3779B9
COLLISION_RADIUS = 1e-14


@dataclass
class EmpiricalMeasure:
    """Point cloud with weights summing to one."""

    points: np.ndarray
    weights: np.ndarray | None = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex).ravel()
        if len(self.points) == 0:
            raise ValueError("empty measure")
        if self.weights is None:
            self.weights = np.full(len(self.points), 1.0 / len(self.points))
        else:
            w = np.asarray(self.weights, dtype=float).ravel()
            if len(w) != len(self.points) or np.any(w < 0) or w.sum() <= 0:
                raise ValueError("weights must be nonnegative, one per point")
            self.weights = w / w.sum()

    def __len__(self) -> int:
        return len(self.points)

    def potential(self, probes: np.ndarray, block: int = 1 << 22) -> np.ndarray:
        """``V(p) = sum_i w_i log|p - x_i|`` at each probe."""
        probes = np.atleast_1d(np.asarray(probes, dtype=complex))
        out = np.empty(len(probes))
        step = max(1, block // len(self.points))
        with np.errstate(divide="ignore"):
            for s in range(0, len(probes), step):
                d = np.abs(probes[s:s + step, None] - self.points[None, :])
                out[s:s + step] = (np.log(d) * self.weights[None, :]).sum(axis=1)
        return out

    def mean(self, values: np.ndarray) -> float | complex:
        return np.sum(self.weights * values)

    def pushforward(self, f: Callable[[np.ndarray], np.ndarray]) -> "EmpiricalMeasure":
        return EmpiricalMeasure(f(self.points), self.weights.copy(), dict(self.provenance))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["re", "im", "weight"])
            for z, wt in zip(self.points, self.weights):
                w.writerow([repr(float(z.real)), repr(float(z.imag)), repr(float(wt))])

    @classmethod
    def from_csv(cls, path) -> "EmpiricalMeasure":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        pts = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
        wts = np.array([float(r["weight"]) for r in rows])
        return cls(pts, wts)

    def to_json(self) -> dict:
        return {
            "points": [[float(z.real), float(z.imag)] for z in self.points],
            "weights": [float(w) for w in self.weights],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "EmpiricalMeasure":
        if isinstance(data, str):
            data = json.loads(data)
        pts = np.array([complex(a, b) for a, b in data["points"]])
        return cls(pts, np.array(data["weights"]), data.get("provenance", {}))


class PotentialMeasure:
    """A measure known through a closed-form log-potential.

    ``support_sample`` is a small set of representative points used only to
    place default probes.
    """

    def __init__(self, potential: Callable[[np.ndarray], np.ndarray], support_sample):
        self._potential = potential
        self.points = np.asarray(support_sample, dtype=complex).ravel()

    def potential(self, probes: np.ndarray) -> np.ndarray:
        return np.asarray(self._potential(np.atleast_1d(np.asarray(probes, dtype=complex))), dtype=float)


def unit_circle_measure(samples: int = 256) -> PotentialMeasure:
    """Normalized arc length on |z| = 1; its potential is ``log max(1, |p|)``."""
    theta = 2 * np.pi * np.arange(samples) / samples
    return PotentialMeasure(lambda p: np.log(np.maximum(1.0, np.abs(p))), np.exp(1j * theta))


def default_probes(mu, nu) -> np.ndarray:
    """32 probes determined by the union of the two supports.

    Half lie on the circle of radius twice the hull radius about the union
    centroid.  The other half are random convex combinations of union points
    pulled halfway toward the centroid.  The union is sorted first and the
    random stream is fixed, so the probe set does not depend on argument order.
    """
    pts = np.concatenate([mu.points, nu.points])
    pts = pts[np.lexsort((pts.imag, pts.real))]
    center = pts.mean()
    hull = float(np.max(np.abs(pts - center)))
    if hull == 0:
        hull = 1.0
    theta = 2 * np.pi * (np.arange(N_CIRCLE_PROBES) + 0.5) / N_CIRCLE_PROBES
    outer = center + 2 * hull * np.exp(1j * theta)
    rng = np.random.Generator(np.random.Philox(key=np.array([PROBE_SEED, len(pts)], dtype=np.uint64)))
    k = min(8, len(pts))
    idx = rng.integers(0, len(pts), size=(N_INTERIOR_PROBES, k))
    lam = rng.dirichlet(np.ones(k), size=N_INTERIOR_PROBES)
    inner_raw = (lam * pts[idx]).sum(axis=1)
    inner = center + 0.5 * (inner_raw - center)
    return np.concatenate([outer, inner])


def _avoid_collisions(probes: np.ndarray, clouds) -> tuple[np.ndarray, int]:
    probes = probes.copy()
    moved = 0
    for cloud in clouds:
        for i, p in enumerate(probes):
            if np.min(np.abs(cloud - p)) < COLLISION_RADIUS:
                probes[i] = p + 1e-9 * (1 + abs(p))
                moved += 1
    return probes, moved


def measure_distance_detail(mu, nu, probes=None) -> dict:
    """Distance plus the probe set and how many probes were nudged off samples."""
    probes = default_probes(mu, nu) if probes is None else np.atleast_1d(np.asarray(probes, dtype=complex))
    probes, moved = _avoid_collisions(probes, [m.points for m in (mu, nu) if isinstance(m, EmpiricalMeasure)])
    diff = np.abs(mu.potential(probes) - nu.potential(probes))
    return {"distance": float(diff.max()), "probes": probes, "perturbed": moved,
            "argmax": int(diff.argmax())}


def measure_distance(mu, nu, probes=None) -> float:
    """``max_p |V_mu(p) - V_nu(p)|`` over a probe set (default: :func:`default_probes`)."""
    return measure_distance_detail(mu, nu, probes)["distance"]
