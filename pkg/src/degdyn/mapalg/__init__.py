"""Exact polynomial algebra and the map parser."""

from .gaussian import GaussianRational
from .maps import (
    AffineMap,
    BiProjMap,
    NonDominantMapError,
    ProjMap,
    homogenize,
    is_dominant,
    jacobian_det,
    parse_map,
)
from .parse import MapSyntaxError, format_poly
from .poly import EXPONENT_GUARD, ExponentOverflowError, MultiPoly, gcd_list, poly_gcd
from .ratfunc import RationalFunction


def compose(f, g):
    """``f ∘ g`` for two ProjMaps, two BiProjMaps or two AffineMaps."""
    if type(f) is not type(g):
        raise TypeError("both maps must use the same model")
    return f.compose(g)


__all__ = [
    "AffineMap", "BiProjMap", "EXPONENT_GUARD", "ExponentOverflowError", "GaussianRational",
    "MapSyntaxError", "MultiPoly", "NonDominantMapError", "ProjMap", "RationalFunction",
    "compose", "format_poly", "gcd_list", "homogenize", "is_dominant", "jacobian_det",
    "parse_map", "poly_gcd",
]
