"""Supports, liftings, mixed cells, mixed volumes and height bounds."""

from .supports import LiftingFunction, Point, SupportFamily, group_supports, lifting_range, random_lifting
from .cells import (
    GENERICITY_CHECK_LIMIT,
    MixedCell,
    check_lifting_generic,
    enumerate_all_cells,
    enumerate_mixed_cells,
    mixed_volume,
)
from .volume import (
    convex_hull_volume,
    height_bound_E,
    height_bound_Eprime,
    hull_vertices,
    mixed_volume_oracle,
    unit_simplex,
)
from .intmat import int_det, rank
