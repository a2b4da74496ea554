"""Indeterminacy sets at infinity and the regularity test for polynomial automorphisms.

The extension of a polynomial map of degree ``d`` to ``P^k`` is undefined
exactly where the restrictions ``L_i = P_i(x, 0)`` of its homogeneous
components to the hyperplane ``t = 0`` vanish together.  Three exact
routes compute that common zero set:

* all nonzero ``L_i`` monomials: a union of coordinate subspaces, found
  from the minimal sets of coordinates meeting every monomial's support
  (any ``k``);
* ``k = 2``: the roots of the binary form ``gcd(L_i)``;
* ``k = 3``: the curve ``gcd(L_i) = 0`` plus the finitely many common zeros
  of the cofactors, located through Sylvester resultants in general
  coordinates.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from ..degrees.report import degree_sequence
from ..mapalg.maps import AffineMap, ProjMap, homogenize
from ..mapalg.parse import format_poly
from ..mapalg.poly import MultiPoly, gcd_list
from ..numerics.roots import roots
from .maps import HenonMap

POINT_TOL = 1e-8
VANISH_TOL = 1e-9


class UnsupportedIndeterminacy(ValueError):
    """The leading forms fall outside the exact routes implemented here."""


@dataclass
class IndeterminacySet:
    """Common zeros of the leading forms on the hyperplane at infinity of ``P^k``.

    ``points`` are homogeneous coordinates of ``P^k`` (last entry ``t = 0``),
    ``curves`` defining equations of curve components (``k = 3``) and
    ``subspaces`` the zero-coordinate index sets of coordinate subspaces.
    """

    k: int
    names: list
    points: list = field(default_factory=list)
    curves: list = field(default_factory=list)
    subspaces: list = field(default_factory=list)
    whole_hyperplane: bool = False

    @property
    def dim(self) -> int:
        """Dimension of the set (``-1`` when empty)."""
        if self.whole_hyperplane:
            return self.k - 1
        dims = [0] * bool(self.points) + [1] * bool(self.curves)
        dims += [self.k - 1 - len(T) for T in self.subspaces]
        return max(dims) if dims else -1

    def is_empty(self) -> bool:
        return self.dim < 0

    def contains(self, x, tol: float = VANISH_TOL) -> bool:
        x = np.asarray(x, dtype=complex)[: self.k]
        x = x / np.max(np.abs(x))
        if self.whole_hyperplane:
            return True
        if any(_proj_close(x, np.asarray(p[: self.k])) for p in self.points):
            return True
        for T in self.subspaces:
            if all(abs(x[i]) <= tol for i in T):
                return True
        for eq in self.curves:
            if abs(eq.evaluate(list(x))) <= tol * _coef_scale(eq):
                return True
        return False

    def describe(self) -> list:
        out = []
        for p in self.points:
            out.append({"point": [[complex(c).real, complex(c).imag] for c in p]})
        for eq in self.curves:
            out.append({"curve": format_poly(eq, self.names[: self.k]) + " = t = 0"})
        for T in self.subspaces:
            eqs = [f"{self.names[i]} = 0" for i in T] + ["t = 0"]
            dim = self.k - 1 - len(T)
            out.append({"subspace": ", ".join(eqs), "dim": dim,
                        **({"point": [[float(i not in T), 0.0] for i in range(self.k)] + [[0.0, 0.0]]}
                           if dim == 0 else {})})
        if self.whole_hyperplane:
            out.append({"subspace": "t = 0", "dim": self.k - 1})
        return out

    def to_json(self) -> dict:
        return {"dim": self.dim, "components": self.describe()}


def _proj_close(a: np.ndarray, b: np.ndarray, tol: float = POINT_TOL) -> bool:
    """Equality in projective space, compared in the chart of ``a``'s largest coordinate."""
    i = int(np.argmax(np.abs(a)))
    if abs(b[i]) < 0.5 * np.max(np.abs(b)):
        return False
    return bool(np.max(np.abs(a / a[i] - b / b[i])) <= tol)


def _coef_scale(p: MultiPoly) -> float:
    return max(abs(complex(c)) for _, c in p.items())


def leading_forms(F: ProjMap) -> list[MultiPoly]:
    """``P_i(x, 0)`` for the affine components, as forms in the first ``k`` variables."""
    k = F.dim
    out = []
    for P in F.components[:k]:
        terms = {e[:k]: c for e, c in P.items() if e[k] == 0}
        out.append(MultiPoly(k, terms))
    return out


# ---------------------------------------------------------------- monomials


def _monomial_route(forms: list[MultiPoly], k: int) -> list[tuple]:
    """Minimal coordinate sets ``T`` such that ``{x_T = 0}`` kills every monomial."""
    supports = [frozenset(i for i, e in enumerate(f.items()[0][0]) if e) for f in forms]
    if any(not s for s in supports):
        return []  # a nonzero constant form: nothing vanishes
    minimal = []
    for size in range(1, k + 1):
        for T in itertools.combinations(range(k), size):
            Ts = set(T)
            if any(set(m) <= Ts for m in minimal):
                continue
            if all(s & Ts for s in supports):
                minimal.append(T)
    # the empty projective set {x = 0} is not a component
    return [T for T in minimal if len(T) < k]


# ------------------------------------------------------------------ k = 2


def _binary_roots(g: MultiPoly) -> list[tuple]:
    """Distinct zeros ``[x0 : x1]`` of a nonzero binary form."""
    e = g.degree()
    c = np.zeros(e + 1, dtype=complex)
    for (i, _), v in g.items():
        c[i] = complex(v)
    pts = []
    nz = np.nonzero(c)[0]
    lo, hi = int(nz[0]), int(nz[-1])
    if lo > 0:
        pts.append((0j, 1 + 0j))
    if hi < e:
        pts.append((1 + 0j, 0j))
    core = c[lo:hi + 1]
    if len(core) > 1:
        rs = roots(core)
        for s in rs.roots:
            pts.append((complex(s), 1 + 0j))
    return pts


# ------------------------------------------------------------------ k = 3


def _bareiss_det(M: list[list[MultiPoly]], n_vars: int) -> MultiPoly:
    M = [row[:] for row in M]
    n = len(M)
    sign = 1
    prev = MultiPoly.one(n_vars)
    for kk in range(n - 1):
        if M[kk][kk].is_zero():
            swap = next((r for r in range(kk + 1, n) if not M[r][kk].is_zero()), None)
            if swap is None:
                return MultiPoly.zero(n_vars)
            M[kk], M[swap] = M[swap], M[kk]
            sign = -sign
        for i in range(kk + 1, n):
            for j in range(kk + 1, n):
                M[i][j] = (M[i][j] * M[kk][kk] - M[i][kk] * M[kk][j]).divexact(prev)
        prev = M[kk][kk]
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det


def resultant(p: MultiPoly, q: MultiPoly, var: int) -> MultiPoly:
    """Sylvester resultant in ``var`` by fraction-free elimination."""
    cp, cq = p.coefficients_in(var), q.coefficients_in(var)
    m, n = max(cp), max(cq)
    zero = MultiPoly.zero(p.nvars)
    size = m + n
    rows = []
    for r in range(n):
        rows.append([cp.get(m - (j - r), zero) if 0 <= j - r <= m else zero for j in range(size)])
    for r in range(m):
        rows.append([cq.get(n - (j - r), zero) if 0 <= j - r <= n else zero for j in range(size)])
    return _bareiss_det(rows, p.nvars)


def _linear_change(forms: list[MultiPoly], M: list[list[int]]) -> list[MultiPoly]:
    k = len(M)
    lin = [MultiPoly(k, {tuple(int(j == c) for j in range(k)): M[r][c] for c in range(k) if M[r][c]})
           for r in range(k)]
    return [f.substitute(lin) for f in forms]


def _ternary_points(forms: list[MultiPoly], rng: random.Random) -> list[tuple]:
    """Finite common zero set of ternary forms without common factor."""
    for _ in range(8):
        M = [[1, 0, rng.randint(-3, 3)], [0, 1, rng.randint(-3, 3)], [0, 0, 1]]
        G = _linear_change(forms, M)
        # every form must have full degree in the last variable (no zero at [0:0:1])
        if all(not g.coefficient((0, 0, g.degree())).is_zero() for g in G):
            break
    else:
        raise UnsupportedIndeterminacy("no generic coordinates found for the elimination")
    res = []
    for a, b in itertools.combinations(range(len(G)), 2):
        if gcd_list([G[a], G[b]]).degree() == 0:
            r = resultant(G[a], G[b], 2)
            res.append(MultiPoly(2, {e[:2]: c for e, c in r.items()}))
    if not res:
        raise UnsupportedIndeterminacy("no coprime pair among the leading forms")
    R = gcd_list(res)
    if R.degree() <= 0:
        return []
    pts = []
    for y0, y1 in _binary_roots(R):
        # common roots in the last variable over this projection point
        uni = []
        for g in G:
            c = np.zeros(g.degree() + 1, dtype=complex)
            for e, v in g.items():
                c[e[2]] += complex(v) * y0 ** e[0] * y1 ** e[1]
            uni.append(c)
        base = min((u for u in uni if np.any(u)), key=len)
        for y2 in roots(np.trim_zeros(base, "b")).roots:
            y = np.array([y0, y1, y2])
            vals = [abs(complex(g.evaluate([complex(v) for v in y]))) / _coef_scale(g)
                    / max(1.0, float(np.max(np.abs(y)))) ** g.degree() for g in G]
            if max(vals) <= 1e-7:
                x = np.array(M, dtype=float) @ y
                pts.append(tuple(x / x[np.argmax(np.abs(x))]))
    distinct = []
    for p in pts:
        if not any(_proj_close(np.array(p), np.array(q)) for q in distinct):
            distinct.append(p)
    return distinct


def indeterminacy_points(F: ProjMap | AffineMap, seed: int = 0) -> IndeterminacySet:
    """Indeterminacy set of the homogenization of a polynomial map of ``C^k``."""
    if isinstance(F, AffineMap):
        F = homogenize(F, "proj")
    k = F.dim
    names = list(F.names)
    forms = [f for f in leading_forms(F) if not f.is_zero()]
    out = IndeterminacySet(k, names)
    if not forms:
        out.whole_hyperplane = True
        return out
    if all(len(f) == 1 for f in forms):
        out.subspaces = _monomial_route(forms, k)
        return _collapse_points(out)
    g = gcd_list(forms)
    if k == 2:
        if g.degree() > 0:
            out.points = [(x0, x1, 0j) for x0, x1 in _binary_roots(g)]
            out.points = [tuple(np.array(p) / p[int(np.argmax(np.abs(p)))]) for p in out.points]
        return out
    if k == 3:
        cof = forms
        if g.degree() > 0:
            out.curves = [g]
            cof = [f.divexact(g) for f in forms]
        if any(c.degree() == 0 for c in cof):
            return out  # a nonzero constant cofactor: the curve is everything
        pts = _ternary_points(cof, random.Random(seed))
        out.points = [p + (0j,) for p in pts if not (out.curves and _on_curves(out.curves, p))]
        return out
    raise UnsupportedIndeterminacy(
        f"k = {k}: indeterminacy is computed only when the leading forms are monomials")


def _on_curves(curves, p) -> bool:
    return any(abs(c.evaluate([complex(v) for v in p])) <= VANISH_TOL * _coef_scale(c) for c in curves)


def _collapse_points(s: IndeterminacySet) -> IndeterminacySet:
    """Zero-dimensional coordinate subspaces become explicit points."""
    keep = []
    for T in s.subspaces:
        if s.k - 1 - len(T) == 0:
            (i,) = [j for j in range(s.k) if j not in T]
            s.points.append(tuple(complex(j == i) for j in range(s.k)) + (0j,))
        else:
            keep.append(T)
    s.subspaces = keep
    return s


# ----------------------------------------------------------------- regularity


def intersection(A: IndeterminacySet, B: IndeterminacySet) -> dict:
    """Whether two indeterminacy sets meet, with the witnessing points when known."""
    if A.k != B.k:
        raise ValueError("sets live in different spaces")
    if A.is_empty() or B.is_empty():
        return {"meets": False, "points": []}
    wit = [p for p in A.points if B.contains(p)] + [p for p in B.points if A.contains(p)]
    if wit:
        return {"meets": True, "points": [[[complex(c).real, complex(c).imag] for c in p] for p in wit]}
    # positive-dimensional parts of complementary dimension always meet
    da = max([1] * bool(A.curves) + [A.k - 1 - len(T) for T in A.subspaces] +
             [A.k - 1] * A.whole_hyperplane, default=-1)
    db = max([1] * bool(B.curves) + [B.k - 1 - len(T) for T in B.subspaces] +
             [B.k - 1] * B.whole_hyperplane, default=-1)
    if da >= 0 and db >= 0:
        if A.subspaces and B.subspaces and not (A.curves or B.curves):
            meets = [sorted(set(T) | set(U)) for T in A.subspaces for U in B.subspaces
                     if len(set(T) | set(U)) < A.k]
            return {"meets": bool(meets), "points": [],
                    "common_zero_coordinates": meets}
        if da + db >= A.k - 1:
            return {"meets": True, "points": []}
        raise UnsupportedIndeterminacy("cannot decide whether these components meet")
    return {"meets": False, "points": []}


@dataclass
class RegularityReport:
    regular: bool
    l: int | None
    I_f: IndeterminacySet
    I_f_inverse: IndeterminacySet
    intersection: dict
    degrees: list
    degrees_inverse: list
    lambda1: float
    lambda1_inverse: float
    lambda_l_predicted: float | None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"regular": self.regular, "l": self.l, "I_f": self.I_f.to_json(),
                "I_f_inverse": self.I_f_inverse.to_json(), "intersection": self.intersection,
                "degrees": self.degrees, "degrees_inverse": self.degrees_inverse,
                "lambda1": self.lambda1, "lambda1_inverse": self.lambda1_inverse,
                "lambda_l_predicted": self.lambda_l_predicted, "notes": self.notes}


def _is_identity(f: AffineMap) -> bool:
    return f == AffineMap.identity(f.nvars, f.names)


def regularity_check(f: AffineMap | HenonMap, inverse: AffineMap | None = None,
                     N: int = 6, seed: int = 0) -> RegularityReport:
    """Disjointness of ``I_f`` and ``I_{f^-1}`` and ``l = dim I_{f^-1} + 1``.

    Hénon chains supply their own exact inverse; other automorphisms need
    ``inverse``, which is verified by exact composition on both sides.
    """
    if isinstance(f, HenonMap):
        inverse = f.inverse_affine_map() if inverse is None else inverse
        f = f.affine_map()
    if inverse is None:
        raise ValueError("inverse unavailable: pass the inverse map explicitly")
    if not (f.is_polynomial() and inverse.is_polynomial()):
        raise ValueError("regularity is defined for polynomial automorphisms")
    if not (_is_identity(f.compose(inverse)) and _is_identity(inverse.compose(f))):
        raise ValueError("the supplied inverse is not a two-sided inverse")
    notes = []
    if f.degree() < 2:
        notes.append("affine automorphism: regularity concerns non-affine maps")
    If = indeterminacy_points(f, seed)
    Ig = indeterminacy_points(inverse, seed)
    inter = intersection(If, Ig)
    regular = not inter["meets"] and f.degree() >= 2
    F, G = homogenize(f, "proj"), homogenize(inverse, "proj")
    rf = degree_sequence(F, N, seed=seed)
    rg = degree_sequence(G, N, seed=seed)
    l = Ig.dim + 1 if regular else None
    pred = rf.lambda1.value ** l if l is not None else None
    if not regular:
        notes.append("not regular; weak regularity is not decided here")
    return RegularityReport(regular, l, If, Ig, inter, [int(d) for d in rf.degrees],
                            [int(d) for d in rg.degrees], rf.lambda1.value, rg.lambda1.value, pred,
                            notes)

