"""Dynamics of one-variable polynomials and rational maps of the sphere."""

from .exceptional import ExceptionalSet, exceptional_points, local_degree, totally_ramified_points
from .experiments import (OBSERVABLES, BallMassTable, HolderEstimate, MixingResult, SweepGrid,
                          ball_mass_check, chi_quadratic, holder_estimate, mixing_experiment,
                          observable, parameter_sweep, quadratic_family_green)
from .green import (CapacityCheck, GreenParams, GreenValue, capacity_check, equilibrium_potential,
                    escape_radius, green, green_array, green_grid, green_offset)
from .lyapunov import (LyapunovReport, chi_top_estimate, depth_bias, dimension_estimate, lyapunov,
                       lyapunov_birkhoff, lyapunov_critical)
from .maps1d import (Conjugacy, Poly1C, RatMap1C, conjugate, normalize_monic_centered,
                     parse_map1d)
from .periodic import PeriodicOrbit, PeriodicPoints, periodic_points
from .sampling import (EquidistributionResult, ExceptionalStartError, default_start,
                       exact_reference, first_branch_masses, ks_arcsine, preimage_equidistribution,
                       preimage_tree, sample_measure, sampled_reference)

__all__ = [
    "OBSERVABLES", "BallMassTable", "CapacityCheck", "Conjugacy", "EquidistributionResult",
    "ExceptionalSet", "ExceptionalStartError", "GreenParams", "GreenValue", "HolderEstimate",
    "LyapunovReport", "MixingResult", "PeriodicOrbit", "PeriodicPoints", "Poly1C", "RatMap1C",
    "SweepGrid", "ball_mass_check", "capacity_check", "chi_quadratic", "chi_top_estimate",
    "conjugate", "default_start", "depth_bias", "dimension_estimate", "equilibrium_potential",
    "escape_radius", "exact_reference", "exceptional_points", "first_branch_masses", "green",
    "green_array", "green_grid", "green_offset", "holder_estimate", "ks_arcsine", "local_degree",
    "lyapunov", "lyapunov_birkhoff", "lyapunov_critical", "mixing_experiment",
    "normalize_monic_centered", "observable", "parameter_sweep", "parse_map1d", "periodic_points",
    "preimage_equidistribution", "preimage_tree", "quadratic_family_green", "sample_measure",
    "sampled_reference", "totally_ramified_points",
]
