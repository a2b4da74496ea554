"""Shared numerical kernels: root finding, random streams, measure distance, grids."""

from .grids import Grid, read_pgm, write_grid_csv, write_pgm
from .measure import (
    EmpiricalMeasure,
    PotentialMeasure,
    default_probes,
    measure_distance,
    measure_distance_detail,
    unit_circle_measure,
)
from .rng import RandomStream, fresh_seed, stream
from .roots import RootSet, cauchy_bound, cluster, roots, roots_batch, roots_by_evaluation

__all__ = [
    "EmpiricalMeasure", "Grid", "PotentialMeasure", "RandomStream", "RootSet", "cauchy_bound",
    "cluster", "default_probes", "fresh_seed", "measure_distance", "measure_distance_detail",
    "read_pgm", "roots", "roots_batch", "roots_by_evaluation", "stream", "unit_circle_measure",
    "write_grid_csv", "write_pgm",
]
