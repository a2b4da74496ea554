"""Hénon maps of C^2: Green functions, periodic points and regularity of automorphisms."""

from .green import (HenonGreenParams, PointClass, classify_point, green_minus, green_minus_array,
                    green_plus, green_plus_array)
from .maps import HenonGenerator, HenonMap, parse_henon
from .periodic import HenonPeriodicPoint, HenonPeriodicPoints, fixed_points_henon
from .regular import (IndeterminacySet, RegularityReport, UnsupportedIndeterminacy, indeterminacy_points,
                      intersection, leading_forms, regularity_check, resultant)

__all__ = [
    "HenonGenerator", "HenonGreenParams", "HenonMap", "HenonPeriodicPoint", "HenonPeriodicPoints",
    "IndeterminacySet", "PointClass", "RegularityReport", "UnsupportedIndeterminacy",
    "classify_point", "fixed_points_henon", "green_minus", "green_minus_array", "green_plus",
    "green_plus_array", "indeterminacy_points", "intersection", "leading_forms", "parse_henon",
    "regularity_check", "resultant",
]
