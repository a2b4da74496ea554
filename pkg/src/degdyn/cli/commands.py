"""Subcommand flags and handlers.

Every handler takes the parsed namespace and returns ``(result, artifacts)``,
where ``artifacts`` lists the files it wrote.
"""

from __future__ import annotations

import math

import numpy as np

from ..degrees import (degree_sequence, fixed_point_count, monomial_degrees,
                       quadratic_classify_degrees, submultiplicative, topological_degree)
from ..henon import (HenonGreenParams, classify_point, fixed_points_henon, green_minus_array,
                     green_plus_array, parse_henon, regularity_check)
from ..mapalg import AffineMap, MapSyntaxError, homogenize, parse_map
from ..numerics import Grid, write_grid_csv, write_pgm
from ..onedim import (GreenParams, Poly1C, ball_mass_check, default_start, dimension_estimate,
                      green, green_grid, holder_estimate, ks_arcsine, lyapunov, mixing_experiment,
                      parameter_sweep, parse_map1d, periodic_points, preimage_equidistribution,
                      sample_measure)


class NumericalFailure(ArithmeticError):
    """A computation finished but did not meet its convergence criterion."""

    def __init__(self, message: str, result, artifacts=None):
        super().__init__(message)
        self.result = result
        self.artifacts = artifacts or []


def parse_complex(text: str) -> complex:
    s = str(text).strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError as exc:
        raise ValueError(f"cannot read {text!r} as a complex number") from exc


def parse_point(text: str) -> tuple[complex, complex]:
    parts = [p for p in str(text).split(",") if p.strip()]
    if len(parts) != 2:
        raise ValueError(f"point {text!r} must be 'z,w'")
    return parse_complex(parts[0]), parse_complex(parts[1])


def parse_int_list(text: str) -> list[int]:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def parse_matrix(text: str) -> list[list[int]]:
    rows = [r for r in str(text).split(";") if r.strip()]
    try:
        return [[int(v) for v in r.replace(",", " ").split()] for r in rows]
    except ValueError as exc:
        raise ValueError(f"matrix {text!r} must be integer rows separated by ';'") from exc


def _poly1d(text: str, polynomial_only: bool = False):
    f = parse_map1d(text)
    if polynomial_only and not isinstance(f, Poly1C):
        raise ValueError("this command needs a polynomial map")
    return f


def _affine(text: str, variables=None) -> AffineMap:
    f = parse_map(text, "affine", variables)
    if not isinstance(f, AffineMap):
        raise MapSyntaxError("expected an affine map '(f1, ..., fk)'", 0)
    return f


def _variables(ns):
    return [v.strip() for v in ns.variables.split(",")] if getattr(ns, "variables", None) else None


# ------------------------------------------------------------------ handlers


def cmd_degrees(ns):
    model = ns.model if ns.model.startswith(("proj", "biproj")) else f"proj_{ns.model}"
    f = parse_map(ns.map, model, _variables(ns))
    topdeg = None
    if ns.topdeg:
        topdeg = topological_degree(_affine(ns.map, _variables(ns)), seed=ns.seed)
    rep = degree_sequence(f, ns.n, method=ns.method, seed=ns.seed, topological_degree=topdeg)
    out = rep.to_json()
    if rep.model == "P^k":
        out["submultiplicative"] = submultiplicative(rep.degrees)
    return out, []


def cmd_topdeg(ns):
    f = _affine(ns.map, _variables(ns))
    return {"map": ns.map, "topological_degree": topological_degree(f, trials=ns.trials, seed=ns.seed)}, []


def cmd_classify_quadratic(ns):
    f = _affine(ns.map, _variables(ns))
    return quadratic_classify_degrees(f, N=ns.n, seed=ns.seed), []


def cmd_monomial(ns):
    return monomial_degrees(parse_matrix(ns.matrix), N=ns.n), []


def _green_params(ns):
    return GreenParams(max_iter=ns.max_iter)


def cmd_green(ns):
    f = _poly1d(ns.map, polynomial_only=True)
    params = _green_params(ns)
    result, artifacts = {"map": ns.map}, []
    if ns.point is not None:
        result["point"] = green(f, parse_complex(ns.point), params)
    if ns.grid:
        grid = Grid.parse(ns.grid)
        G = green_grid(f, grid, params)
        pgm = ns.pgm or "green.pgm"
        csv_path = ns.csv or "green.csv"
        result["pgm_mapping"] = write_pgm(pgm, G)
        write_grid_csv(csv_path, grid, G, name="G")
        artifacts += [pgm, f"{pgm}.json", csv_path]
        zero = np.argwhere(G == 0)
        pts = grid.points()
        result["grid"] = grid.to_dict()
        result["G_min"], result["G_max"] = float(G.min()), float(G.max())
        result["zero_fraction"] = float(len(zero) / G.size)
        if len(zero):
            zp = pts[zero[:, 0], zero[:, 1]]
            result["zero_set_box"] = {"re": [float(zp.real.min()), float(zp.real.max())],
                                      "im": [float(zp.imag.min()), float(zp.imag.max())]}
    if ns.point is None and not ns.grid:
        raise ValueError("green needs --point or --grid")
    return result, artifacts


def _sample(ns, f):
    start = parse_complex(ns.start) if ns.start is not None else default_start(f)
    return sample_measure(f, ns.depth, ns.samples, start=start, seed=ns.seed, threads=ns.threads)


def cmd_measure(ns):
    f = _poly1d(ns.map)
    mu = _sample(ns, f)
    artifacts = []
    if ns.csv:
        mu.to_csv(ns.csv)
        artifacts.append(ns.csv)
    if ns.json_out:
        from .output import dumps, jsonable
        with open(ns.json_out, "w") as fh:
            fh.write(dumps(jsonable(mu)) + "\n")
        artifacts.append(ns.json_out)
    z = mu.points
    result = {"count": len(mu), "provenance": mu.provenance, "mean": complex(mu.mean(z)),
              "mean_square": complex(mu.mean(z * z)), "max_abs": float(np.max(np.abs(z))),
              "noise_level": 4 / math.sqrt(len(mu))}
    if ns.ks_arcsine:
        result["ks_arcsine"] = ks_arcsine(z)
    return result, artifacts


def cmd_lyapunov(ns):
    f = _poly1d(ns.map)
    mu = _sample(ns, f)
    rep = lyapunov(f, mu, with_top=ns.with_top)
    result = rep.to_json()
    d = f.degree
    result["half_log_degree"] = 0.5 * math.log(d)
    if rep.chi_critical is not None:
        gap = abs(rep.chi_birkhoff - rep.chi_critical)
        result["routes_gap"] = gap
        result["routes_agree"] = bool(gap <= 3 * rep.stderr)
        result["dimension_estimate"] = dimension_estimate(f)
    if ns.holder:
        if not isinstance(f, Poly1C):
            raise ValueError("--holder needs a polynomial map")
        h = holder_estimate(f, pair_count=ns.pairs, seed=ns.seed, chi_top=rep.chi_top_estimate)
        result["holder"] = h
        result["ball_mass"] = ball_mass_check(f, mu, h.alpha, seed=ns.seed)
    return result, []


def cmd_periodic(ns):
    f = _poly1d(ns.map, polynomial_only=True)
    res = periodic_points(f, ns.n, seed=ns.seed, reference=None if ns.no_reference else "sampled")
    out = res.to_json()
    out["expected_count"] = f.degree ** ns.n
    if not ns.list_points:
        out.pop("points", None)
    if not res.converged:
        raise NumericalFailure(f"root finder did not converge (residual {res.residual:.2e})", out)
    return out, []


def cmd_equidist(ns):
    f = _poly1d(ns.map)
    depths = parse_int_list(ns.depths)
    return preimage_equidistribution(f, parse_complex(ns.start), depths, seed=ns.seed), []


def cmd_mixing(ns):
    f = _poly1d(ns.map)
    return mixing_experiment(f, ns.phi, ns.psi, n_max=ns.n_max, N=ns.samples, seed=ns.seed,
                             depth=ns.depth, threads=ns.threads), []


def cmd_sweep(ns):
    res = parameter_sweep(ns.grid, circle_points=ns.circle_points, tol=ns.tol, max_iter=ns.max_iter)
    out = res.to_json()
    for label, t in (("chi_at_0", 0.0), ("chi_at_minus_2", -2.0)):
        idx = np.argwhere(np.abs(res.t - t) < 1e-12)
        if len(idx):
            out[label] = float(res.chi[tuple(idx[0])])
    csv_path = ns.csv or "sweep.csv"
    res.to_csv(csv_path)
    return out, [csv_path]


def cmd_henon(ns):
    h = parse_henon(ns.map, a=parse_complex(ns.a))
    params = HenonGreenParams(max_iter=ns.max_iter)
    result = {"map": ns.map, "degree": h.degree, "jacobian_constant": h.jacobian_constant,
              "generators": [{"p": g.p.coeffs, "a": g.a} for g in h.generators]}
    artifacts = []
    result["periodic"] = fixed_points_henon(h, period=ns.period, seed=ns.seed)
    if ns.point:
        result["point"] = classify_point(h, parse_point(ns.point), params)
    if ns.n:
        rep = degree_sequence(homogenize(h.affine_map(), "proj"), ns.n, seed=ns.seed,
                              topological_degree=1)
        result["degrees"] = rep
    if ns.grid:
        grid = Grid.parse(ns.grid)
        Z = grid.points()
        W = np.full(Z.shape, parse_complex(ns.w))
        fn = green_plus_array if ns.which == "plus" else green_minus_array
        G = fn(h, Z, W, params)[0]
        pgm = ns.pgm or f"green_{ns.which}.pgm"
        csv_path = ns.csv or f"green_{ns.which}.csv"
        result["pgm_mapping"] = write_pgm(pgm, G)
        write_grid_csv(csv_path, grid, G, name=f"G_{ns.which}")
        artifacts += [pgm, f"{pgm}.json", csv_path]
        result["grid"] = {**grid.to_dict(), "w": parse_complex(ns.w), "which": ns.which}
    return result, artifacts


def cmd_regularity(ns):
    if ns.henon:
        f = parse_henon(ns.henon, a=parse_complex(ns.a))
        inverse = None
    else:
        if not ns.map:
            raise ValueError("regularity needs --map or --henon")
        names = _variables(ns)
        f = _affine(ns.map, names)
        inverse = _affine(ns.inverse, names or f.names) if ns.inverse else None
    return regularity_check(f, inverse, N=ns.n, seed=ns.seed), []


def cmd_fixcount(ns):
    f = _affine(ns.map, _variables(ns))
    return fixed_point_count(f, ns.period, seed=ns.seed, holomorphic=ns.holomorphic,
                             trials=ns.trials), []


COMMANDS = {
    "degrees": (cmd_degrees, "degree sequence, dynamical degrees and stability"),
    "topdeg": (cmd_topdeg, "topological degree of a polynomial map of C² by elimination"),
    "classify-quadratic": (cmd_classify_quadratic, "dynamical degrees and class of a quadratic map of C²"),
    "monomial": (cmd_monomial, "dynamical degrees of a monomial map"),
    "green": (cmd_green, "Green function of a polynomial at a point or on a grid"),
    "measure": (cmd_measure, "sample the equilibrium measure by backward iteration"),
    "lyapunov": (cmd_lyapunov, "Lyapunov exponent by Birkhoff averages and critical points"),
    "periodic": (cmd_periodic, "periodic points of a polynomial and their equidistribution"),
    "equidist": (cmd_equidist, "distance of iterated preimages to the equilibrium measure"),
    "mixing": (cmd_mixing, "decay of correlations for the equilibrium measure"),
    "sweep": (cmd_sweep, "Lyapunov exponent over a grid of the family z^2 + t"),
    "henon": (cmd_henon, "Green functions and periodic points of Hénon maps"),
    "regularity": (cmd_regularity, "indeterminacy sets and regularity of a polynomial automorphism"),
    "fixcount": (cmd_fixcount, "count solutions of f^n(x) = x on C²"),
}


def _seed(p):
    p.add_argument("--seed", type=int, default=None, help="64-bit seed (generated and recorded if omitted)")


def _map(p, required=True, help_text="map text"):
    p.add_argument("--map", required=required, help=help_text)


def add_arguments(name: str, p) -> None:
    if name == "degrees":
        _map(p)
        p.add_argument("--model", default="proj", help="proj, proj_k or biproj")
        p.add_argument("--n", type=int, default=10, help="number of iterates")
        p.add_argument("--method", choices=["modular", "exact"], default="modular")
        p.add_argument("--variables", help="comma-separated variable order")
        p.add_argument("--topdeg", action="store_true", help="also compute the topological degree")
        _seed(p)
    elif name in ("topdeg", "fixcount"):
        _map(p)
        p.add_argument("--variables")
        p.add_argument("--trials", type=int, default=3)
        if name == "fixcount":
            p.add_argument("--period", type=int, default=1)
            p.add_argument("--holomorphic", action="store_true",
                           help="the map extends holomorphically to P²; report the Lefschetz total")
        _seed(p)
    elif name == "classify-quadratic":
        _map(p)
        p.add_argument("--variables")
        p.add_argument("--n", type=int, default=12)
        _seed(p)
    elif name == "monomial":
        p.add_argument("--matrix", required=True, help="integer rows, e.g. '1 1; 1 0'")
        p.add_argument("--n", type=int, default=10)
    elif name == "green":
        _map(p, help_text="polynomial in z")
        p.add_argument("--point", help="complex point, e.g. 3 or 1+2i")
        p.add_argument("--grid", help="xmin:xmax:ymin:ymax:n[:ny]")
        p.add_argument("--max-iter", type=int, default=200)
        p.add_argument("--pgm", help="heatmap path (default green.pgm)")
        p.add_argument("--csv", help="grid values path (default green.csv)")
    elif name in ("measure", "lyapunov", "mixing"):
        _map(p, help_text="polynomial or rational map in z")
        p.add_argument("--samples", type=int, default=100_000)
        p.add_argument("--depth", type=int, default=40)
        _seed(p)
        if name != "mixing":
            p.add_argument("--start", help="start point of backward iteration")
        if name == "measure":
            p.add_argument("--csv", help="write samples as CSV (re, im, weight)")
            p.add_argument("--json-out", help="write samples as JSON")
            p.add_argument("--ks-arcsine", action="store_true",
                           help="report the KS distance of real parts to the arcsine law")
        elif name == "lyapunov":
            p.add_argument("--with-top", action="store_true", help="also estimate chi_top")
            p.add_argument("--holder", action="store_true", help="also estimate the Hölder exponent")
            p.add_argument("--pairs", type=int, default=4000)
        else:
            p.add_argument("--phi", default="gauss(1,0,0.5)")
            p.add_argument("--psi", default=None, help="defaults to phi")
            p.add_argument("--n-max", type=int, default=10)
    elif name == "periodic":
        _map(p, help_text="polynomial in z")
        p.add_argument("--n", type=int, required=True, help="period")
        p.add_argument("--no-reference", action="store_true", help="skip the distance to a sampled measure")
        p.add_argument("--list-points", action="store_true")
        _seed(p)
    elif name == "equidist":
        _map(p)
        p.add_argument("--start", required=True, help="root of the preimage tree")
        p.add_argument("--depths", default="1-12", help="e.g. 1-12 or 2,4,8")
        _seed(p)
    elif name == "sweep":
        p.add_argument("--grid", default="-2.5:2.5:-2.5:2.5:60:60")
        p.add_argument("--circle-points", type=int, default=16)
        p.add_argument("--tol", type=float, default=1e-3)
        p.add_argument("--max-iter", type=int, default=200)
        p.add_argument("--csv", help="output path (default sweep.csv)")
    elif name == "henon":
        _map(p, help_text="p(z), or a chain 'p1 @ a1; p2 @ a2'")
        p.add_argument("--a", default="1", help="Jacobian constant for generators without '@'")
        p.add_argument("--period", type=int, default=1)
        p.add_argument("--point", help="classify the point 'z,w'")
        p.add_argument("--n", type=int, default=0, help="also report the degree sequence on P²")
        p.add_argument("--grid", help="z-plane grid for a G heatmap")
        p.add_argument("--w", default="0", help="second coordinate of the grid slice")
        p.add_argument("--which", choices=["plus", "minus"], default="plus")
        p.add_argument("--max-iter", type=int, default=200)
        p.add_argument("--pgm")
        p.add_argument("--csv")
        _seed(p)
    elif name == "regularity":
        _map(p, required=False, help_text="affine polynomial automorphism")
        p.add_argument("--inverse", help="its inverse, same variables")
        p.add_argument("--henon", help="Hénon chain instead of --map")
        p.add_argument("--a", default="1")
        p.add_argument("--variables")
        p.add_argument("--n", type=int, default=6)
        _seed(p)
