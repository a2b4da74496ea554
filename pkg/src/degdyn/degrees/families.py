"""Closed-form degree formulas for skew products and monomial maps, and quadratic classification."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from ..mapalg.maps import AffineMap, BiProjMap, homogenize
from ..mapalg.poly import MultiPoly
from .elimination import topological_degree
from .engine import modular_degrees
from .report import _matpow_int, degree_sequence, ratio_estimate, spectral_radius

PHI = (1 + math.sqrt(5)) / 2
CLASS_TOL = 1e-6

# Dynamical-degree pairs of quadratic polynomial maps of C².
QUADRATIC_CLASSES = {
    "golden-birational": (PHI, 1.0),
    "henon-type": (2.0, 1.0),
    "skew(sqrt2,2)": (math.sqrt(2), 2.0),
    "skew(golden,2)": (PHI, 2.0),
    "skew(2,3)": (2.0, 3.0),
    "skew(2,4)": (2.0, 4.0),
}


def skew_degrees(d: Sequence[int]) -> list[int]:
    """``lambda_l`` = largest product of ``l`` distinct entries, ``lambda_0 = 1``."""
    if not d:
        raise ValueError("need at least one degree")
    s = sorted((int(x) for x in d), reverse=True)
    out = [1]
    for x in s:
        out.append(out[-1] * x)
    return out


def skew_degrees_bruteforce(d: Sequence[int]) -> list[int]:
    """Same as :func:`skew_degrees` by enumerating every index subset."""
    k = len(d)
    return [max(math.prod(c) for c in combinations(d, l)) if l else 1 for l in range(k + 1)]


def max_convolution(a: Sequence[float], b: Sequence[float]) -> list[float]:
    """``c_l = max_{i+j=l} a_i b_j``: dynamical degrees of a product map."""
    out = [0.0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = max(out[i + j], x * y)
    return out


# ---------------------------------------------------------------------------
# monomial maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialMap:
    """``x_i -> prod_j x_j^{A[i][j]}`` for an integer matrix with nonzero determinant."""

    A: tuple

    def __init__(self, A):
        rows = tuple(tuple(int(x) for x in row) for row in A)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "A", rows)
        if self.det() == 0:
            raise ValueError("monomial map needs det A != 0")

    @property
    def k(self) -> int:
        return len(self.A)

    def det(self) -> int:
        """Exact determinant by fraction-free elimination."""
        m = [[Fraction(x) for x in r] for r in self.A]
        n = len(m)
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det *= m[c][c]
            for r in range(c + 1, n):
                f = m[r][c] / m[c][c]
                for j in range(c, n):
                    m[r][j] -= f * m[c][j]
        return int(det)

    def to_biproj(self) -> BiProjMap:
        """The k=2 map on P¹×P¹ in coordinates ``z = z0/z1``, ``w = w0/w1``."""
        if self.k != 2:
            raise ValueError("P¹×P¹ model only for 2×2 matrices")
        (a, b), (c, d) = self.A
        return BiProjMap(_monomial_pair(a, b), _monomial_pair(c, d))


def _monomial_pair(a: int, b: int) -> list[MultiPoly]:
    # z^a w^b = z0^a z1^-a w0^b w1^-b, negative powers moved to the other side
    num = [max(a, 0), max(-a, 0), max(b, 0), max(-b, 0)]
    den = [max(-a, 0), max(a, 0), max(-b, 0), max(b, 0)]
    return [MultiPoly.monomial(num), MultiPoly.monomial(den)]


@dataclass
class MonomialDegrees:
    lambda1: float
    lambdak: int
    lambda1_power: float
    bidegrees: list | None = None
    abs_powers: list | None = None
    sequence_matches: bool | None = None
    predictions: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _power_iteration_radius(A: tuple, steps: int = 64) -> float:
    """Spectral radius from exact integer powers: ``(|A^{2n}| / |A^n|)^{1/n}``."""
    m = [list(r) for r in A]
    An = _matpow_int(m, steps)
    A2n = _matmul_int(An, An)
    na = max(abs(x) for r in An for x in r)
    n2 = max(abs(x) for r in A2n for x in r)
    return math.exp((math.log(n2) - math.log(na)) / steps)


def _matmul_int(a, b):
    return [[sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def monomial_degrees(A, N: int = 10) -> MonomialDegrees:
    """``lambda_1`` = spectral radius of ``A``, ``lambda_k = |det A|``.

    For ``k = 2`` the bidegree matrices of the iterates on P¹×P¹ are computed
    by exact composition and compared with the entrywise absolute values of
    ``A^n``.  For ``k >= 3`` the intermediate degrees are only *predicted*
    as products of the largest eigenvalue moduli; they are labeled as such.
    """
    f = A if isinstance(A, MonomialMap) else MonomialMap(A)
    eig = np.linalg.eigvals(np.array(f.A, dtype=float))
    lam1 = spectral_radius(f.A)
    out = MonomialDegrees(lam1, abs(f.det()), _power_iteration_radius(f.A))
    if f.k == 2:
        g = f.to_biproj()
        h = g
        mats, absp = [], []
        for n in range(1, N + 1):
            if n > 1:
                h = g.compose(h)
            mats.append([row[:] for row in h.matrix])
            # the P¹×P¹ map sends (z, w) to (z^a w^b, z^c w^d): its iterate has matrix A^n
            absp.append([[abs(x) for x in row] for row in _matpow_int([list(r) for r in f.A], n)])
        out.bidegrees, out.abs_powers = mats, absp
        out.sequence_matches = mats == absp
    else:
        mods = sorted(np.abs(eig), reverse=True)
        out.predictions = {
            "status": "conjectural; not a verified output",
            "lambda_j": [1.0] + [float(np.prod(mods[:j])) for j in range(1, f.k + 1)],
        }
    return out


# ---------------------------------------------------------------------------
# quadratic maps of C²
# ---------------------------------------------------------------------------

def match_class(lambda1: float, lambda2: float, tol: float = CLASS_TOL) -> str | None:
    for name, (l1, l2) in QUADRATIC_CLASSES.items():
        if abs(lambda1 - l1) <= tol and abs(lambda2 - l2) <= tol:
            return name
    return None


@dataclass
class QuadraticClassification:
    lambda1: float
    lambda1_err: float
    lambda2: int
    matched_class: str | None
    stable_model: str | None
    models: dict
    candidate_class: str | None = None
    warning: str | None = None

    def to_json(self) -> dict:
        return dict(self.__dict__)


def quadratic_classify_degrees(f: AffineMap, N: int = 12, seed: int = 0,
                               extended_N: int = 20) -> QuadraticClassification:
    """Dynamical degrees of a quadratic polynomial map of C² and its class.

    ``lambda_1`` is taken from whichever of ``P²`` and ``P¹×P¹`` is stable
    within ``N`` iterates; ``lambda_2`` is the topological degree.  When
    neither model is stable, ``matched_class`` stays ``None`` and a warning
    is issued; ``candidate_class`` then records the class matched by the
    ``P²`` ratio estimate at ``extended_N`` iterates.
    """
    if not f.is_polynomial() or f.dim != 2:
        raise ValueError("need a polynomial map of C²")
    if max(p.degree() for p in f.polys()) != 2:
        raise ValueError("map is not quadratic")
    rp = degree_sequence(homogenize(f, "proj"), N, seed=seed)
    rb = degree_sequence(homogenize(f, "biproj"), N, seed=seed)
    lam2 = topological_degree(f, seed=seed)
    models = {"P2": {"stable": rp.stable, "degrees": rp.degrees, "lambda1": rp.lambda1.value,
                     "err": rp.lambda1.err},
              "P1xP1": {"stable": rb.stable, "degrees": rb.degrees, "lambda1": rb.lambda1.value,
                        "err": rb.lambda1.err}}
    if rp.stable or rb.stable:
        chosen, name = (rp, "P2") if rp.stable else (rb, "P1xP1")
        lam1 = chosen.lambda1.value
        return QuadraticClassification(lam1, 0.0, lam2, match_class(lam1, lam2), name, models)
    degs = modular_degrees(homogenize(f, "proj"), extended_N, seed=seed)
    est = ratio_estimate(degs)
    msg = f"neither P2 nor P1xP1 is stable within N={N}; lambda1 is an estimate"
    warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return QuadraticClassification(est.value, est.err, lam2, None, None, models,
                                   candidate_class=match_class(est.value, lam2), warning=msg)
