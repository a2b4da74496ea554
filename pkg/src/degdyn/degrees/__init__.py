"""Degree growth of iterates, dynamical degrees and solution counts by elimination."""

from .elimination import (EliminationError, FixedPointCount, Solutions, fixed_point_count,
                          solve_system, topological_degree)
from .engine import DEGREE_CAP, DegreeGuardError, exact_degrees, modular_degrees
from .families import (QUADRATIC_CLASSES, MonomialDegrees, MonomialMap, QuadraticClassification,
                       match_class, max_convolution, monomial_degrees, quadratic_classify_degrees,
                       skew_degrees, skew_degrees_bruteforce)
from .report import (DegreeReport, Estimate, HyperbolicityVerdict, concavity_ok, degree_sequence,
                     hyperbolicity_verdict, is_stable, ratio_estimate, spectral_radius,
                     submultiplicative)

__all__ = [
    "DEGREE_CAP", "DegreeGuardError", "DegreeReport", "EliminationError", "Estimate",
    "FixedPointCount", "HyperbolicityVerdict", "MonomialDegrees", "MonomialMap",
    "QUADRATIC_CLASSES", "QuadraticClassification", "Solutions", "concavity_ok",
    "degree_sequence", "exact_degrees", "fixed_point_count", "hyperbolicity_verdict", "is_stable",
    "match_class", "max_convolution", "modular_degrees", "monomial_degrees",
    "quadratic_classify_degrees", "ratio_estimate", "skew_degrees", "skew_degrees_bruteforce",
    "solve_system", "spectral_radius", "submultiplicative", "topological_degree",
]
