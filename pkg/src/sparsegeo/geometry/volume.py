"""Exact convex-hull volumes, an inclusion-exclusion mixed-volume oracle, and
the T-degree bounds E and E' derived from it.

Volumes are exact rationals. In dimension 1 and 2 the hull is computed
directly; in dimension 3 and 4 the facet structure comes from qhull (through
scipy) and is then certified with integer arithmetic before any volume is
summed: every facet normal is recomputed from integer cofactors, every input
point must lie on its inner side, and the oriented facet normals must sum to
zero (the boundary is closed). The volume is the sum of the cones from the
exact centroid over the certified facets.
"""

import itertools
import math
from fractions import Fraction
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull

from ..errors import ConsistencyError
from .intmat import rank
from .supports import LiftingFunction, SupportFamily

IntPoint = Tuple[int, ...]


def _dedupe(points: Sequence[Sequence[int]]) -> List[IntPoint]:
    return sorted({tuple(int(x) for x in p) for p in points})


def _affine_rank(points: List[IntPoint]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


def _hull_2d(points: List[IntPoint]) -> List[IntPoint]:
    """Counter-clockwise hull vertices by the monotone chain method."""
    pts = sorted(points)
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: List[IntPoint] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[IntPoint] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _cofactor_normal(rows: List[List[int]]) -> List[int]:
    """Vector orthogonal to the d-1 rows of a (d-1) x d integer matrix."""
    from .intmat import int_det

    d = len(rows) + 1
    out = []
    for j in range(d):
        minor = [r[:j] + r[j + 1:] for r in rows]
        out.append((-1) ** j * int_det(minor))
    return out


def _certified_facets(points: List[IntPoint]) -> Tuple[List[Tuple[List[int], int, IntPoint]], List[IntPoint]]:
    """Simplicial boundary facets (oriented inward) and the hull vertices.

    Each facet is returned as ``(normal, offset, base)`` with
    ``normal . x >= offset`` for every input point.
    """
    d = len(points[0])
    arr = np.array(points, dtype=float)
    try:
        hull = ConvexHull(arr)
    except Exception as exc:  # qhull rejects flat input; callers test rank first
        raise ConsistencyError(f"qhull failed on a full-dimensional point set: {exc}") from exc
    big = max(abs(x) for p in points for x in p)
    dtype = np.int64 if big < 1000 else object
    P = np.array(points, dtype=dtype)
    facets = []
    closure = [0] * d
    # twice the sum of coordinates over the number of points stays integral
    total = [sum(p[k] for p in points) for k in range(d)]
    count = len(points)
    for simplex in hull.simplices:
        verts = [points[i] for i in simplex]
        base = verts[0]
        rows = [[a - b for a, b in zip(v, base)] for v in verts[1:]]
        normal = _cofactor_normal(rows)
        if all(x == 0 for x in normal):
            continue
        # orient towards the centroid: normal . (count * base) <= normal . total
        side = sum(nk * (tk - count * bk) for nk, tk, bk in zip(normal, total, base))
        if side < 0:
            normal = [-x for x in normal]
        elif side == 0:
            raise ConsistencyError("facet hyperplane passes through the centroid")
        offset = sum(nk * bk for nk, bk in zip(normal, base))
        vals = P.dot(np.array(normal, dtype=dtype))
        if (vals < offset).any():
            raise ConsistencyError("qhull facet is not supporting")
        facets.append((normal, offset, base))
        closure = [c + x for c, x in zip(closure, normal)]
    if any(c != 0 for c in closure):
        raise ConsistencyError("qhull facets do not close up")
    vertices = sorted({points[i] for i in hull.vertices})
    return facets, vertices


def hull_vertices(points: Sequence[Sequence[int]]) -> List[IntPoint]:
    """Vertices of the convex hull (all points if the hull is lower-dimensional)."""
    pts = _dedupe(points)
    d = len(pts[0])
    r = _affine_rank(pts)
    if r < d:
        return pts
    if d == 1:
        return [pts[0], pts[-1]]
    if d == 2:
        return sorted(_hull_2d(pts))
    return _certified_facets(pts)[1]


def convex_hull_volume(points: Sequence[Sequence[int]]) -> Fraction:
    """Exact Euclidean volume of the convex hull of integer points."""
    pts = _dedupe(points)
    d = len(pts[0])
    if _affine_rank(pts) < d:
        return Fraction(0)
    if d == 1:
        return Fraction(pts[-1][0] - pts[0][0])
    if d == 2:
        hull = _hull_2d(pts)
        twice = 0
        for i in range(len(hull)):
            x1, y1 = hull[i]
            x2, y2 = hull[(i + 1) % len(hull)]
            twice += x1 * y2 - x2 * y1
        return Fraction(abs(twice), 2)
    facets, _ = _certified_facets(pts)
    total = [sum(p[k] for p in pts) for k in range(d)]
    count = len(pts)
    acc = 0
    for normal, offset, base in facets:
        # height of count * centroid above the facet plane, times |normal|
        acc += sum(nk * tk for nk, tk in zip(normal, total)) - count * offset
    return Fraction(acc, count * math.factorial(d))


def minkowski_sum(a: Sequence[IntPoint], b: Sequence[IntPoint]) -> List[IntPoint]:
    """Hull vertices of the Minkowski sum of two point sets."""
    pts = {tuple(x + y for x, y in zip(p, q)) for p in a for q in b}
    return hull_vertices(list(pts))


def mixed_volume_oracle(polytopes: Sequence[Sequence[Sequence[int]]]) -> Fraction:
    """Mixed volume of d polytopes in R^d by inclusion-exclusion.

    MV(P_1, ..., P_d) = sum over nonempty I of (-1)^(d-|I|) vol(sum_{i in I} P_i),
    normalized so that MV(P, ..., P) = d! vol(P).
    """
    d = len(polytopes)
    if d == 0:
        return Fraction(1)
    verts = [hull_vertices(p) for p in polytopes]
    sums: Dict[FrozenSet[int], List[IntPoint]] = {}
    total = Fraction(0)
    for size in range(1, d + 1):
        for idx in itertools.combinations(range(d), size):
            key = frozenset(idx)
            if size == 1:
                pts = verts[idx[0]]
            else:
                pts = minkowski_sum(sums[frozenset(idx[:-1])], verts[idx[-1]])
            sums[key] = pts
            sign = -1 if (d - size) % 2 else 1
            total += sign * convex_hull_volume(pts)
    return total


def unit_simplex(n: int, ambient: int = None) -> List[IntPoint]:
    """conv(0, e_1, ..., e_n) embedded in R^ambient (default n)."""
    ambient = n if ambient is None else ambient
    pts = [tuple([0] * ambient)]
    for i in range(n):
        e = [0] * ambient
        e[i] = 1
        pts.append(tuple(e))
    return pts


def _as_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ConsistencyError(f"{what} = {x} is not an integer")
    return int(x)


def height_bound_E(family: SupportFamily, lift: LiftingFunction) -> int:
    """MV_{n+1} of the simplex in {T = 0} and the lifted Newton polytopes."""
    n = family.n
    polys = [unit_simplex(n, n + 1)]
    for i in range(n):
        ell = family.class_of[i]
        polys.append([q + (lift(ell, q),) for q in family.classes[ell]])
    return _as_int(mixed_volume_oracle(polys), "E")


def height_bound_Eprime(family: SupportFamily) -> int:
    """Sum over i of MV_n(simplex, Q_1, ..., Q_n with Q_i left out)."""
    n = family.n
    simplex = unit_simplex(n)
    supports = [list(family.support_of(i)) for i in range(n)]
    total = 0
    for i in range(n):
        polys = [simplex] + supports[:i] + supports[i + 1:]
        total += _as_int(mixed_volume_oracle(polys), "E'")
    return total
