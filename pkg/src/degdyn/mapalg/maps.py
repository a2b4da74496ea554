"""Affine, projective and biprojective self-maps with exact coefficients."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .parse import MapSyntaxError, format_poly, format_ratfunc, parse_expressions
from .poly import EXPONENT_GUARD, ExponentOverflowError, MultiPoly, gcd_list, poly_gcd
from .ratfunc import RationalFunction


class NonDominantMapError(ValueError):
    """The map has identically vanishing Jacobian or is the zero map."""


def _normalize(components: list[MultiPoly]) -> list[MultiPoly]:
    """Divide by the common gcd and scale the first nonzero leading coefficient to 1."""
    g = gcd_list(components)
    if not g.is_constant():
        components = [c.divexact(g) for c in components]
    lead = next(c for c in components if not c.is_zero()).leading_coefficient()
    if not lead.is_one():
        inv = lead.inverse()
        components = [c.scale(inv) for c in components]
    return components


class AffineMap:
    """``k`` rational functions in ``k`` affine variables."""

    def __init__(self, components: Sequence[RationalFunction | MultiPoly], names: Sequence[str] | None = None):
        comps = [c if isinstance(c, RationalFunction) else RationalFunction(c) for c in components]
        if not comps:
            raise ValueError("an affine map needs at least one component")
        n = comps[0].nvars
        if any(c.nvars != n for c in comps):
            raise ValueError("components live in different rings")
        self.components = [c.reduced() for c in comps]
        self.names = list(names) if names is not None else _affine_names(n)
        if len(self.names) != n:
            raise ValueError("one name per variable required")

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    @property
    def dim(self) -> int:
        return len(self.components)

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.components)

    def polys(self) -> list[MultiPoly]:
        if not self.is_polynomial():
            raise ValueError("map has non-constant denominators")
        return [c.num for c in self.components]

    def degree(self) -> int:
        """Max total degree over numerators and denominators."""
        return max(max(c.num.degree(), c.den.degree()) for c in self.components)

    @classmethod
    def identity(cls, k: int, names: Sequence[str] | None = None) -> "AffineMap":
        return cls([MultiPoly.variable(k, i) for i in range(k)], names)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self ∘ other``."""
        if self.nvars != other.dim:
            raise ValueError("dimension mismatch")
        return AffineMap([c.substitute(other.components) for c in self.components], other.names)

    def iterate(self, n: int) -> "AffineMap":
        if n < 0:
            raise ValueError("iterate index must be >= 0")
        result = AffineMap.identity(self.nvars, self.names)
        for _ in range(n):
            result = self.compose(result)
        return result

    def numeric(self):
        """Vectorized complex evaluator ``F(*coords) -> list of arrays``."""
        evals = [(_complex_eval(c.num), _complex_eval(c.den) if not c.is_polynomial() else None)
                 for c in self.components]

        def F(*coords):
            out = []
            for num, den in evals:
                v = num(coords)
                out.append(v / den(coords) if den is not None else v)
            return out

        return F

    def __eq__(self, other):
        return isinstance(other, AffineMap) and self.components == other.components

    def __hash__(self):
        return hash(tuple(self.components))

    def __str__(self):
        return "(" + ", ".join(format_ratfunc(c, self.names) for c in self.components) + ")"

    def __repr__(self):
        return f"AffineMap({self})"


def _affine_names(n: int) -> list[str]:
    base = ["z", "w", "u", "v", "s"]
    return base[:n] if n <= len(base) else [f"x{i}" for i in range(n)]


def _complex_eval(p: MultiPoly):
    terms = p.complex_terms()

    def ev(coords):
        coords = [np.asarray(c, dtype=complex) for c in coords]
        shape = np.broadcast(*coords).shape if coords else ()
        total = np.zeros(shape, dtype=complex)
        for exps, c in terms:
            t = c
            for x, e in zip(coords, exps):
                if e:
                    t = t * x ** e
            total = total + t
        return total

    return ev


class ProjMap:
    """``[P_0 : ... : P_k]`` on ``P^k``: homogeneous, common degree, gcd-reduced.

    Normalized so that the first nonzero component has leading coefficient 1;
    two equal maps therefore have identical components.
    """

    def __init__(self, components: Sequence[MultiPoly], names: Sequence[str] | None = None):
        comps = list(components)
        if len(comps) < 2:
            raise ValueError("a map of P^k needs k+1 >= 2 components")
        n = comps[0].nvars
        if any(c.nvars != n for c in comps) or n != len(comps):
            raise ValueError("P^k map needs k+1 components in k+1 variables")
        if all(c.is_zero() for c in comps):
            raise NonDominantMapError("zero map")
        degs = {c.degree() for c in comps if not c.is_zero()}
        if len(degs) != 1 or not all(c.is_homogeneous() for c in comps):
            raise ValueError("components must be homogeneous of a common degree")
        self.components = _normalize(comps)
        self.degree = max(c.degree() for c in self.components)
        if self.degree < 1:
            raise NonDominantMapError("constant map")
        self.names = list(names) if names is not None else [f"x{i}" for i in range(n)]

    @property
    def dim(self) -> int:
        return len(self.components) - 1

    @classmethod
    def identity(cls, k: int, names: Sequence[str] | None = None) -> "ProjMap":
        return cls([MultiPoly.variable(k + 1, i) for i in range(k + 1)], names)

    def compose(self, other: "ProjMap") -> "ProjMap":
        """``self ∘ other`` followed by gcd reduction."""
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        comps = [c.substitute(other.components) for c in self.components]
        if all(c.is_zero() for c in comps):
            raise NonDominantMapError("composition is the zero map")
        return ProjMap(comps, other.names)

    def iterate(self, n: int) -> "ProjMap":
        result = ProjMap.identity(self.dim, self.names)
        for _ in range(n):
            result = self.compose(result)
        return result

    def __eq__(self, other):
        return isinstance(other, ProjMap) and self.components == other.components

    def __hash__(self):
        return hash(tuple(self.components))

    def __str__(self):
        return "[" + " : ".join(format_poly(c, self.names) for c in self.components) + "]"

    def __repr__(self):
        return f"ProjMap({self})"


class BiProjMap:
    """Self-map of P¹×P¹ as two coprime pairs in ``(z0, z1, w0, w1)``.

    ``pair_z`` is bihomogeneous of bidegree ``(a, b)`` and gives the first
    factor; ``pair_w`` has bidegree ``(c, d)``.  ``matrix == [[a, b], [c, d]]``.
    """

    def __init__(self, pair_z: Sequence[MultiPoly], pair_w: Sequence[MultiPoly],
                 names: Sequence[str] | None = None):
        pz = _reduce_pair(list(pair_z))
        pw = _reduce_pair(list(pair_w))
        self.pair_z = pz
        self.pair_w = pw
        self.names = list(names) if names is not None else ["z0", "z1", "w0", "w1"]
        self.matrix = [list(_bidegree(pz)), list(_bidegree(pw))]
        if self.matrix == [[0, 0], [0, 0]]:
            raise NonDominantMapError("constant map")

    @classmethod
    def identity(cls) -> "BiProjMap":
        v = [MultiPoly.variable(4, i) for i in range(4)]
        return cls(v[:2], v[2:])

    @property
    def components(self) -> list[MultiPoly]:
        return self.pair_z + self.pair_w

    def compose(self, other: "BiProjMap") -> "BiProjMap":
        sub = other.components
        return BiProjMap([c.substitute(sub) for c in self.pair_z],
                         [c.substitute(sub) for c in self.pair_w], other.names)

    def iterate(self, n: int) -> "BiProjMap":
        result = BiProjMap.identity()
        for _ in range(n):
            result = self.compose(result)
        return result

    def __eq__(self, other):
        return isinstance(other, BiProjMap) and self.components == other.components

    def __hash__(self):
        return hash(tuple(self.components))

    def __str__(self):
        f = [format_poly(c, self.names) for c in self.components]
        return f"[{f[0]} : {f[1]} ; {f[2]} : {f[3]}]"

    def __repr__(self):
        return f"BiProjMap({self})"


def _bidegree(pair: list[MultiPoly]) -> tuple[int, int]:
    for c in pair:
        if not c.is_zero():
            exps = next(iter(c.items()))[0]
            return exps[0] + exps[1], exps[2] + exps[3]
    raise NonDominantMapError("zero pair")


def _reduce_pair(pair: list[MultiPoly]) -> list[MultiPoly]:
    if len(pair) != 2 or any(c.nvars != 4 for c in pair):
        raise ValueError("each pair must hold two polynomials in (z0, z1, w0, w1)")
    if all(c.is_zero() for c in pair):
        raise NonDominantMapError("zero pair")
    bideg = None
    for c in pair:
        for exps, _ in c.items():
            bd = (exps[0] + exps[1], exps[2] + exps[3])
            if bideg is None:
                bideg = bd
            elif bd != bideg:
                raise ValueError("pair components must be bihomogeneous of a common bidegree")
    return _normalize(pair)


# ---------------------------------------------------------------------------
# homogenization
# ---------------------------------------------------------------------------

def _common_denominator(f: AffineMap) -> tuple[list[MultiPoly], MultiPoly]:
    den = MultiPoly.one(f.nvars)
    for c in f.components:
        if not c.is_polynomial():
            g = poly_gcd(den, c.den)
            den = den * c.den.divexact(g)
    nums = [c.num * den.divexact(c.den) for c in f.components]
    return nums, den


def _check_exponents(polys):
    for p in polys:
        for i in range(p.nvars):
            if p.degree_in(i) > EXPONENT_GUARD:
                raise ExponentOverflowError(f"degree exceeds the exponent guard {EXPONENT_GUARD}")


def homogenize(f: AffineMap, target: str = "proj"):
    """Extend an affine map to ``P^k`` (``target='proj'``) or ``P¹×P¹`` (``'biproj'``).

    The homogenizing variable of ``P^k`` is appended last and named ``t``.
    """
    target = _model(target)
    if target == "proj":
        nums, den = _common_denominator(f)
        comps = nums + [den]
        d = max(c.degree() for c in comps)
        _check_exponents(comps)
        hom = [c.homogenize(d) if not c.is_zero() else MultiPoly.zero(f.nvars + 1) for c in comps]
        names = list(f.names) + ["t" if "t" not in f.names else "x_h"]
        return ProjMap(hom, names)
    if target == "biproj":
        if f.dim != 2 or f.nvars != 2:
            raise ValueError("P¹×P¹ compactification needs a map of two variables")
        pairs = []
        for c in f.components:
            num, den = c.num, c.den
            a = max(num.degree_in(0), den.degree_in(0))
            b = max(num.degree_in(1), den.degree_in(1))
            pairs.append([_bihomogenize(num, a, b), _bihomogenize(den, a, b)])
        names = [f"{f.names[0]}0", f"{f.names[0]}1", f"{f.names[1]}0", f"{f.names[1]}1"]
        return BiProjMap(pairs[0], pairs[1], names)
    raise ValueError(f"unknown target {target!r}")


def _bihomogenize(p: MultiPoly, a: int, b: int) -> MultiPoly:
    terms = {}
    for (i, j), c in p.items():
        terms[(i, a - i, j, b - j)] = c
    return MultiPoly(4, terms)


# ---------------------------------------------------------------------------
# parsing front end
# ---------------------------------------------------------------------------

def _model(model: str) -> str:
    m = model.lower().replace("-", "_")
    for prefix in ("affine", "proj", "biproj"):
        if m == prefix or m.startswith(prefix + "_"):
            return prefix
    if m in ("p1xp1", "p1p1"):
        return "biproj"
    raise ValueError(f"unknown model {model!r}; expected affine_k, proj_k or biproj")


def parse_map(text: str, model: str = "affine", variables: Sequence[str] | None = None):
    """Parse map text into an AffineMap, ProjMap or BiProjMap.

    ``model`` is one of ``affine_k``, ``proj_k`` or ``biproj`` (the ``_k``
    suffix is optional and checked when present).  Affine text given with a
    projective model is homogenized.  ``variables`` fixes the variable order.
    """
    kind = _model(model)
    shape, names, comps = parse_expressions(text, variables)
    k_wanted = _suffix_dim(model)

    if shape == "biproj":
        if kind != "biproj":
            raise MapSyntaxError("bihomogeneous text requires the biproj model", 0)
        if len(names) != 4:
            raise MapSyntaxError("bihomogeneous maps use four variables z0, z1, w0, w1", 0)
        polys = [_as_poly(c) for c in comps]
        return BiProjMap(polys[:2], polys[2:], names)

    if shape == "hom":
        if kind != "proj":
            raise MapSyntaxError("homogeneous [ : ] text requires the proj model", 0)
        polys = [_as_poly(c) for c in comps]
        if len(names) > len(polys):
            raise MapSyntaxError("more variables than components", 0)
        if len(names) < len(polys):
            raise MapSyntaxError(
                "some variables do not appear; pass the variable list explicitly", 0)
        if any(not p.is_homogeneous() for p in polys) or len(
                {p.degree() for p in polys if not p.is_zero()}) > 1:
            raise ValueError("inhomogeneous components in the proj model")
        if all(p.is_zero() for p in polys):
            raise NonDominantMapError("zero map")
        _check_dim(k_wanted, len(polys) - 1)
        return ProjMap(polys, names)

    # affine tuple or single expression
    if len(names) < len(comps):
        # pad with unused default names so the map is square
        for cand in _affine_names(len(comps)):
            if len(names) >= len(comps):
                break
            if cand not in names:
                names.append(cand)
        from .parse import order_names

        names = order_names(names)
        shape, names, comps = parse_expressions(text, names)
    if len(names) != len(comps):
        raise MapSyntaxError(
            f"{len(comps)} components but {len(names)} variables ({', '.join(names)})", 0)
    if all(c.is_zero() for c in comps):
        raise NonDominantMapError("zero map")
    _check_dim(k_wanted, len(comps))
    f = AffineMap(comps, names)
    if kind == "affine":
        return f
    return homogenize(f, kind)


def _suffix_dim(model: str) -> int | None:
    tail = model.rsplit("_", 1)
    if len(tail) == 2 and tail[1].isdigit():
        return int(tail[1])
    return None


def _check_dim(wanted: int | None, got: int):
    if wanted is not None and wanted != got:
        raise ValueError(f"model declares dimension {wanted} but the map has dimension {got}")


def _as_poly(r: RationalFunction) -> MultiPoly:
    r = r.reduced()
    if not r.is_polynomial():
        raise ValueError("homogeneous components must be polynomials")
    return r.num


def jacobian_det(f: AffineMap) -> RationalFunction:
    """Determinant of the Jacobian matrix; zero exactly when ``f`` is not dominant."""
    k = f.dim
    if f.nvars != k:
        raise ValueError("Jacobian determinant needs a square system")
    m = [[c.derivative(j) for j in range(k)] for c in f.components]
    return _det(m).reduced()


def is_dominant(f: AffineMap) -> bool:
    return not jacobian_det(f).is_zero()


def _det(m: list[list[RationalFunction]]) -> RationalFunction:
    k = len(m)
    if k == 1:
        return m[0][0]
    if k == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(k):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else RationalFunction(MultiPoly.zero(m[0][0].nvars))
