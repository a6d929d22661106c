"""Random and structured test systems."""

import random
from fractions import Fraction
from typing import Optional

from .geometry import mixed_volume_oracle
from .system import SparsePoly, SparseSystem


def random_support(n: int, rng: random.Random, max_points: int = 6, max_exponent: int = 2):
    """The origin plus up to ``max_points - 1`` distinct nonzero exponent vectors."""
    origin = (0,) * n
    available = (max_exponent + 1) ** n - 1
    k = min(available, rng.randint(n, max(n, max_points - 1)))
    pts = {origin}
    while len(pts) < k + 1:
        q = tuple(rng.randint(0, max_exponent) for _ in range(n))
        pts.add(q)
    return tuple(sorted(pts))


def random_system(n: int, rng: random.Random, max_points: int = 6, max_exponent: int = 2,
                  height: int = 10, max_mv: Optional[int] = None) -> SparseSystem:
    """Random system with nonzero coefficients in [-height, height] and positive mixed volume.

    Supports with zero mixed volume (and, if given, mixed volume above
    ``max_mv``) are rejected and redrawn.
    """
    while True:
        supports = [random_support(n, rng, max_points, max_exponent) for _ in range(n)]
        mv = mixed_volume_oracle(supports)
        if mv == 0 or (max_mv is not None and mv > max_mv):
            continue
        polys = []
        for s in supports:
            coeffs = []
            for _ in s:
                c = 0
                while c == 0:
                    c = rng.randint(-height, height)
                coeffs.append(Fraction(c))
            polys.append(SparsePoly(s, tuple(coeffs)))
        return SparseSystem(n, tuple(polys))


def unit_square_system(rng: random.Random, height: int = 10) -> SparseSystem:
    """Two polynomials on the unit square with random nonzero coefficients."""
    sq = ((0, 0), (0, 1), (1, 0), (1, 1))
    polys = []
    for _ in range(2):
        coeffs = []
        for _ in sq:
            c = 0
            while c == 0:
                c = rng.randint(-height, height)
            coeffs.append(Fraction(c))
        polys.append(SparsePoly(sq, tuple(coeffs)))
    return SparseSystem(2, tuple(polys))
