import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from shapely.geometry import MultiPoint

from sparsegeo.errors import DegenerateLifting
from sparsegeo.geometry import (
    LiftingFunction,
    check_lifting_generic,
    convex_hull_volume,
    enumerate_all_cells,
    enumerate_mixed_cells,
    group_supports,
    height_bound_E,
    height_bound_Eprime,
    lifting_range,
    mixed_volume,
    mixed_volume_oracle,
    random_lifting,
    unit_simplex,
)

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]
SIMPLEX2 = [(0, 0), (1, 0), (0, 1)]


def lift_from(family, values):
    """values[l] lists the heights of class l in sorted point order."""
    return LiftingFunction.from_tables(family, [dict(zip(pts, vals)) for pts, vals in zip(family.classes, values)])


def generic_cells(family, seed=0, cap=50):
    rng = random.Random(seed)
    while True:
        lift = random_lifting(family, 100, rng, cap)
        try:
            return lift, enumerate_mixed_cells(family, lift)
        except DegenerateLifting:
            continue


# --- supports and liftings ------------------------------------------------------

def test_group_supports_examples():
    fam = group_supports([SIMPLEX2, SIMPLEX2])
    assert fam.s == 1 and fam.multiplicities == (2,)
    fam = group_supports([[(0, 0), (1, 0)], [(0, 0), (0, 1)]])
    assert fam.s == 2 and fam.multiplicities == (1, 1)
    sq3 = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)]
    fam = group_supports([sq3, sq3, [(0, 0, 0), (0, 0, 2)]])
    assert fam.s == 2 and fam.multiplicities == (2, 1)
    assert fam.class_of == (0, 0, 1)


def test_lifting_range_and_origin():
    fam = group_supports([[(0, 0), (1, 0), (0, 1)], [(0, 0), (1, 1), (2, 0)]])
    assert sum(fam.sizes) == 6
    assert lifting_range(fam, 2) == 128
    for seed in range(20):
        lift = random_lifting(fam, 2, random.Random(seed))
        for ell in range(fam.s):
            table = lift.table(ell)
            assert table[(0, 0)] == 0
            assert all(1 <= w <= 128 for q, w in table.items() if q != (0, 0))


def test_lifting_is_reproducible():
    fam = group_supports([SQUARE, SIMPLEX2])
    a = random_lifting(fam, 100, random.Random(7))
    b = random_lifting(fam, 100, random.Random(7))
    assert a == b


def test_genericity_check():
    sq = group_supports([SQUARE, SQUARE])
    # a flat lifting leaves the four lifted square points in one plane
    assert not check_lifting_generic(sq, lift_from(sq, [[0, 0, 0, 0]]))
    # with only n + 1 points in the class no n + 1 differences can be chosen,
    # so even the flat lifting passes
    fam = group_supports([SIMPLEX2, SIMPLEX2])
    assert check_lifting_generic(fam, lift_from(fam, [[0, 0, 0]]))
    assert check_lifting_generic(sq, lift_from(sq, [[0, 2, 3, 7]]))
    # simplices with an injective lifting on the nonzero points
    fam = group_supports([[(0, 0), (1, 0)], [(0, 0), (0, 1)]])
    assert check_lifting_generic(fam, lift_from(fam, [[0, 1], [0, 2]]))


# --- mixed cells ----------------------------------------------------------------

def test_cells_of_a_segment_chain():
    fam = group_supports([[(0,), (1,), (2,)]])
    cells = enumerate_mixed_cells(fam, lift_from(fam, [[0, 1, 3]]))
    found = {tuple(c.points[0]): c.gamma for c in cells}
    assert found == {((0,), (1,)): (-1, 1), ((1,), (2,)): (-2, 1)}


def test_single_edge_cell():
    fam = group_supports([[(0,), (1,)]])
    cells = enumerate_mixed_cells(fam, lift_from(fam, [[0, 5]]))
    assert len(cells) == 1
    assert cells[0].gamma == (-5, 1)


def test_unit_square_cells():
    fam = group_supports([SQUARE, SQUARE])
    _, cells = generic_cells(fam)
    assert len(cells) == 2
    assert mixed_volume(fam, cells) == 2


def test_tie_raises():
    fam = group_supports([SQUARE, SQUARE])
    # (1, 1) lies on the plane through the other three lifted points
    with pytest.raises(DegenerateLifting):
        enumerate_mixed_cells(fam, lift_from(fam, [[0, 1, 1, 2]]))


def test_mixed_volume_examples():
    fam = group_supports([SIMPLEX2, SIMPLEX2])
    assert mixed_volume(fam, generic_cells(fam)[1]) == 1
    tri = [(0, 0), (2, 0), (0, 2)]
    fam = group_supports([tri, SIMPLEX2])
    assert mixed_volume(fam, generic_cells(fam)[1]) == 2


# --- the oracle -----------------------------------------------------------------

def shapely_area(pts):
    return Fraction(MultiPoint(pts).convex_hull.area).limit_denominator(2)


def shapely_mv2(p, q):
    pq = [(a[0] + b[0], a[1] + b[1]) for a in p for b in q]
    return shapely_area(pq) - shapely_area(p) - shapely_area(q)


def test_oracle_examples():
    assert mixed_volume_oracle([SQUARE, SQUARE]) == 2
    # mixed volume of d copies of one polytope is d! vol
    cube = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    assert mixed_volume_oracle([cube, cube, cube]) == 6
    assert mixed_volume_oracle([[(0, 0), (1, 0)], [(0, 1), (1, 1)]]) == 0


def test_hull_volume():
    assert convex_hull_volume(SQUARE) == 1
    assert convex_hull_volume(unit_simplex(3)) == Fraction(1, 6)


points2 = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=6)


@given(points2, points2)
def test_oracle_matches_shapely_in_the_plane(p, q):
    assert mixed_volume_oracle([p, q]) == shapely_mv2(p, q)


def random_family(rng, n, max_points=5, max_exp=2):
    supports = []
    for _ in range(n):
        k = min(rng.randint(1, max_points - 1), (max_exp + 1) ** n - 1)
        pts = {(0,) * n}
        while len(pts) < k + 1:
            pts.add(tuple(rng.randint(0, max_exp) for _ in range(n)))
        supports.append(sorted(pts))
    if rng.random() < 0.3:
        supports[-1] = supports[0]
    return supports


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_cells_match_oracle(seed, n):
    rng = random.Random(seed)
    supports = random_family(rng, n)
    fam = group_supports(supports)
    _, cells = generic_cells(fam, seed)
    assert mixed_volume(fam, cells) == mixed_volume_oracle(supports)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15, deadline=None)
def test_fine_subdivision_tiles_the_sum(seed):
    rng = random.Random(seed)
    supports = random_family(rng, 2, max_points=4)
    fam = group_supports(supports)
    lift = random_lifting(fam, 100, rng, 1000)
    if not check_lifting_generic(fam, lift):
        return
    total = sum(v for _, v in enumerate_all_cells(fam, lift))
    minkowski = list(fam.classes[0])
    for other in fam.classes[1:]:
        minkowski = [tuple(a + b for a, b in zip(p, q)) for p in minkowski for q in other]
    assert total == convex_hull_volume(minkowski)


# --- height bounds --------------------------------------------------------------

def test_height_bound_examples():
    fam = group_supports([[(0,), (1,), (2,)]])
    # MV of the segment [0, e_1] and conv{(0,0),(1,1),(2,3)}, frozen from shapely
    assert height_bound_E(fam, lift_from(fam, [[0, 1, 3]])) == 3
    assert height_bound_E(fam, lift_from(fam, [[0, 0, 0]])) == 0
    assert height_bound_Eprime(fam) == 1
    assert height_bound_Eprime(group_supports([SQUARE, SQUARE])) == 4
    assert height_bound_Eprime(group_supports([SIMPLEX2, SIMPLEX2])) == 2
    simplex3 = unit_simplex(3)
    assert height_bound_Eprime(group_supports([simplex3] * 3)) == 3


@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 3))
def test_height_bound_monotone(a, b, extra):
    fam = group_supports([[(0,), (1,), (2,)]])
    low = height_bound_E(fam, lift_from(fam, [[0, a, b]]))
    high = height_bound_E(fam, lift_from(fam, [[0, a, b + extra]]))
    assert low <= high
    assert low == shapely_mv2([(0, 0), (1, 0)], [(0, 0), (1, a), (2, b)])
