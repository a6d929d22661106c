"""Genericity test for liftings and enumeration of mixed cells."""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple

from ..errors import DegenerateLifting, NonIntegerVolume
from .intmat import int_det, rank
from .supports import LiftingFunction, Point, SupportFamily

# the exhaustive genericity test is skipped above this many support points
GENERICITY_CHECK_LIMIT = 24


@dataclass(frozen=True)
class MixedCell:
    """A cell of type (k_1, ..., k_s) of the subdivision induced by a lifting.

    ``points[l]`` holds the k_l + 1 points of class l, ``gamma`` the primitive
    inner normal (last entry positive) of the lifted cell, ``volume`` the
    Euclidean volume of the Minkowski sum of the point sets and ``d_gamma``
    the number of start solutions k_1! ... k_s! * volume.
    """

    points: Tuple[Tuple[Point, ...], ...]
    gamma: Tuple[int, ...]
    volume: Fraction
    d_gamma: int

    @property
    def n(self) -> int:
        return len(self.gamma) - 1

    @property
    def m_gamma(self) -> int:
        """Largest of the first n normal entries."""
        return max(self.gamma[:-1])

    def to_json(self) -> Dict:
        return {
            "points": [[list(q) for q in pts] for pts in self.points],
            "gamma": list(self.gamma),
            "volume": _fmt(self.volume),
            "d_gamma": self.d_gamma,
        }


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _difference_rows(subsets: Sequence[Sequence[Point]]) -> List[List[int]]:
    rows = []
    for pts in subsets:
        base = pts[0]
        for q in pts[1:]:
            rows.append([a - b for a, b in zip(q, base)])
    return rows


def _lifted_difference_rows(subsets, lift: LiftingFunction, classes: Sequence[int]) -> List[List[int]]:
    rows = []
    for pts, ell in zip(subsets, classes):
        base = pts[0]
        wb = lift(ell, base)
        for q in pts[1:]:
            rows.append([a - b for a, b in zip(q, base)] + [lift(ell, q) - wb])
    return rows


def _compositions(total: int, bounds: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """Tuples (r_1..r_s) with 0 <= r_l <= bounds[l] summing to ``total``."""
    if not bounds:
        if total == 0:
            yield ()
        return
    for r in range(min(total, bounds[0]) + 1):
        for rest in _compositions(total - r, bounds[1:]):
            yield (r,) + rest


def check_lifting_generic(family: SupportFamily, lift: LiftingFunction) -> bool:
    """Exhaustive test of the rank criterion for a fine mixed subdivision.

    For every choice of point subsets C_l (|C_l| = r_l + 1) with
    r_1 + ... + r_s = n + 1, full rank n of the difference matrix V(C) must
    force full rank n + 1 of its lifted version. Larger configurations reduce
    to these minimal ones.
    """
    n = family.n
    bounds = [len(c) - 1 for c in family.classes]
    for r in _compositions(n + 1, bounds):
        active = [ell for ell in range(family.s) if r[ell] > 0]
        choices = [itertools.combinations(family.classes[ell], r[ell] + 1) for ell in active]
        for subsets in itertools.product(*choices):
            lifted = _lifted_difference_rows(subsets, lift, active)
            if int_det(lifted) != 0:
                continue
            if rank(_difference_rows(subsets)) == n:
                return False
    return True


def _primitive_normal(rows: List[List[int]], rhs: List[int]) -> Tuple[Tuple[int, ...], int]:
    """Integer solution of rows . g = rhs * g_last scaled to be primitive with g_last > 0.

    Returns (gamma, det) where det = det(rows); gamma is None when det == 0.
    """
    n = len(rows)
    det = int_det(rows)
    if det == 0:
        return None, 0
    gam = []
    for i in range(n):
        mod = [row[:i] + [b] + row[i + 1:] for row, b in zip(rows, rhs)]
        gam.append(int_det(mod))
    gam.append(det)
    if det < 0:
        gam = [-x for x in gam]
    g = 0
    for x in gam:
        g = math.gcd(g, x)
    return tuple(x // g for x in gam), det


def enumerate_mixed_cells(family: SupportFamily, lift: LiftingFunction) -> List[MixedCell]:
    """All cells of type (k_1, ..., k_s) of the lifting-induced subdivision.

    Candidate cells are all tuples of (k_l + 1)-subsets; a candidate is kept
    when the lifted points have a common inner normal gamma with positive last
    entry that is strictly minimized on the chosen points of every class.
    A tie with a point outside the candidate means the lifting is not generic
    and raises :class:`DegenerateLifting`.
    """
    n = family.n
    ks = family.multiplicities
    kfact = 1
    for k in ks:
        kfact *= math.factorial(k)
    lifted_classes = []
    for ell, pts in enumerate(family.classes):
        lifted_classes.append([(q, lift(ell, q)) for q in pts])
    cells: List[MixedCell] = []
    choices = [itertools.combinations(range(len(family.classes[ell])), ks[ell] + 1) for ell in range(family.s)]
    for index_sets in itertools.product(*choices):
        rows: List[List[int]] = []
        rhs: List[int] = []
        for ell, idx in enumerate(index_sets):
            lc = lifted_classes[ell]
            q0, w0 = lc[idx[0]]
            for j in idx[1:]:
                q, w = lc[j]
                rows.append([a - b for a, b in zip(q, q0)])
                rhs.append(-(w - w0))
        gamma, det = _primitive_normal(rows, rhs)
        if gamma is None:
            continue
        # A point strictly below rules the candidate out; a tie only matters
        # when the candidate is a genuine lower cell.
        ok = True
        tie = None
        for ell, idx in enumerate(index_sets):
            lc = lifted_classes[ell]
            q0, w0 = lc[idx[0]]
            level = sum(g * x for g, x in zip(gamma, q0 + (w0,)))
            chosen = set(idx)
            for j, (q, w) in enumerate(lc):
                if j in chosen:
                    continue
                val = sum(g * x for g, x in zip(gamma, q + (w,)))
                if val < level:
                    ok = False
                    break
                if val == level and tie is None:
                    tie = (q, [lc[i][0] for i in idx])
            if not ok:
                break
        if not ok:
            continue
        if tie is not None:
            raise DegenerateLifting(f"point {tie[0]} ties with the cell {tie[1]} for normal {gamma}")
        pts = tuple(tuple(lifted_classes[ell][j][0] for j in idx) for ell, idx in enumerate(index_sets))
        d_gamma = abs(det)
        cells.append(MixedCell(points=pts, gamma=gamma, volume=Fraction(d_gamma, kfact), d_gamma=d_gamma))
    return cells


def mixed_volume(family: SupportFamily, cells: Sequence[MixedCell]) -> int:
    """Sum over mixed cells of k_1! ... k_s! * vol."""
    kfact = 1
    for k in family.multiplicities:
        kfact *= math.factorial(k)
    total = sum((c.volume * kfact for c in cells), Fraction(0))
    if total.denominator != 1:
        raise NonIntegerVolume(f"mixed volume {total} is not an integer")
    return int(total)


def enumerate_all_cells(family: SupportFamily, lift: LiftingFunction) -> List[Tuple[Tuple[Tuple[Point, ...], ...], Fraction]]:
    """Every full-dimensional cell of a fine mixed subdivision, with its volume.

    Used to test the tiling property: cells of every type (r_1, ..., r_s)
    with r_1 + ... + r_s = n whose lifted points lie on a common lower facet.
    """
    n = family.n
    out = []
    bounds = [len(c) - 1 for c in family.classes]
    lifted_classes = [[(q, lift(ell, q)) for q in pts] for ell, pts in enumerate(family.classes)]
    for r in _compositions(n, bounds):
        choices = [itertools.combinations(range(len(family.classes[ell])), r[ell] + 1) for ell in range(family.s)]
        for index_sets in itertools.product(*choices):
            rows, rhs = [], []
            for ell, idx in enumerate(index_sets):
                lc = lifted_classes[ell]
                q0, w0 = lc[idx[0]]
                for j in idx[1:]:
                    q, w = lc[j]
                    rows.append([a - b for a, b in zip(q, q0)])
                    rhs.append(-(w - w0))
            gamma, det = _primitive_normal(rows, rhs)
            if gamma is None:
                continue
            ok = True
            for ell, idx in enumerate(index_sets):
                lc = lifted_classes[ell]
                q0, w0 = lc[idx[0]]
                level = sum(g * x for g, x in zip(gamma, q0 + (w0,)))
                for j, (q, w) in enumerate(lc):
                    if j not in idx and sum(g * x for g, x in zip(gamma, q + (w,))) <= level:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                denom = 1
                for x in r:
                    denom *= math.factorial(x)
                pts = tuple(tuple(lifted_classes[ell][j][0] for j in idx) for ell, idx in enumerate(index_sets))
                out.append((pts, Fraction(abs(det), denom)))
    return out
