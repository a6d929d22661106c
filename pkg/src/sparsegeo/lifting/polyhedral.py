"""Per-cell lifting and the curve solution of the polyhedral deformation."""

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..arith import resultant_univariate
from ..binomial import check_start_solution, start_points_in_Z, transport_to_X
from ..errors import NotSeparating, PadeDegenerate
from ..geometry import LiftingFunction, MixedCell, SupportFamily
from ..system import GeometricSolution0D, SparseSystem
from .assembly import (
    CellFactor,
    CurveSolution,
    assemble_and_pade,
    change_linear_form,
    check_separation,
    required_precision,
    shifted_exponents,
    total_shift,
)
from .deformation import DeformedSystem, TPoly, build_deformation
from .newton import SeriesGeometricSolution, newton_lift_stage1, newton_lift_stage2

log = logging.getLogger(__name__)

# The local lifting form only has to separate the start points, so it is
# drawn from a small box; several separating draws are compared by the
# height of the discriminant of their minimal polynomial, which governs how
# fast denominators grow during Newton lifting.
LOCAL_FORM_TRIES = 32
LOCAL_FORM_CANDIDATES = 3


@dataclass(frozen=True)
class CellJob:
    cell: MixedCell
    hgamma: Tuple[TPoly, ...]
    ut: Tuple[int, ...]
    seed: int


@dataclass
class CellLift:
    """A cell's lifted solution (in its local form) and its assembled factor."""

    cell: MixedCell
    series: SeriesGeometricSolution
    factor: CellFactor


def _height(x: Fraction) -> int:
    x = Fraction(x)
    return abs(x.numerator).bit_length() + x.denominator.bit_length()


def local_start_solution(cell: MixedCell, family: SupportFamily, coeffs: Sequence[Dict],
                         ut: Sequence[int], rng: random.Random) -> GeometricSolution0D:
    """Start solution of ``cell`` in a small separating form of low discriminant height."""
    solZ, K = start_points_in_Z(cell, family, coeffs, ut)
    n = family.n
    d = cell.d_gamma
    box = d * d + 1
    best = None
    found = 0
    for _ in range(LOCAL_FORM_TRIES):
        form = [rng.randint(1, box) for _ in range(n)]
        try:
            sol = transport_to_X(solZ, K, form)
        except NotSeparating:
            continue
        m = sol.m
        score = _height(resultant_univariate(m, m.derivative())) if d > 1 else 0
        if best is None or score < best[0]:
            best = (score, sol)
        found += 1
        if found == LOCAL_FORM_CANDIDATES or d == 1:
            break
    if best is None:
        raise NotSeparating(f"no small form separates the start points of cell {cell.gamma}")
    check_start_solution(best[1], cell, family, coeffs)
    return best[1]


def lift_cell(job: CellJob, family: SupportFamily, coeffs: Sequence[Dict], u: Sequence[Fraction],
              target: int, previous: Optional[SeriesGeometricSolution] = None) -> CellLift:
    """Start solution, short lift, separation check, full lift, change of form to ``u``."""
    cell = job.cell
    rng = random.Random(job.seed)
    if previous is None:
        sol0 = local_start_solution(cell, family, coeffs, job.ut, rng)
        _, shifts = shifted_exponents(cell.gamma)
        short = max(1, max(shifts))
        s1 = newton_lift_stage1(sol0, job.hgamma, min(short, target))
        check_separation(change_linear_form(s1, cell.gamma, with_jets=False, u=u), rng)
    else:
        s1 = previous
    s2 = newton_lift_stage2(s1, job.hgamma, target)
    return CellLift(cell, s2, change_linear_form(s2, cell.gamma, u=u))


def coefficient_maps(h: SparseSystem) -> List[Dict]:
    return [dict(f.terms()) for f in h.polynomials]


def polyhedral_curve(h: SparseSystem, family: SupportFamily, lift: LiftingFunction, cells: Sequence[MixedCell],
                     u: Sequence[Fraction], uts: Sequence[Tuple[int, ...]], seeds: Sequence[int], bound: int,
                     slack: int, threads: int = 1) -> Tuple[CurveSolution, List[CellLift], int]:
    """Geometric solution of the curve h^(X, T) = 0 with respect to ``u``.

    Each cell is lifted to the precision needed for Pade recovery with
    degree bound ``bound``. If recovery fails, the lifts are extended once to
    ``bound + slack`` and recovery is retried. Returns the curve, the per-cell
    lifts and the bound that succeeded.
    """
    deformation: DeformedSystem = build_deformation(h, family, lift, cells)
    coeffs = coefficient_maps(h)
    jobs = [CellJob(c, deformation.hgamma[c.gamma], tuple(ut), s) for c, ut, s in zip(cells, uts, seeds)]
    nu = total_shift([(c.gamma, c.d_gamma) for c in cells])

    def run(bound_now, previous):
        def one(k):
            job = jobs[k]
            target = required_precision(job.cell.gamma, bound_now, nu)
            prev = previous[k].series if previous else None
            return lift_cell(job, family, coeffs, u, target, prev)
        if threads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                return list(pool.map(one, range(len(jobs))))
        return [one(k) for k in range(len(jobs))]

    lifts = run(bound, None)
    try:
        curve = assemble_and_pade([cl.factor for cl in lifts], bound, u)
        return curve, lifts, bound
    except PadeDegenerate as exc:
        log.info("Pade recovery failed at bound %d (%s); extending by %d", bound, exc, slack)
    bigger = bound + slack
    lifts = run(bigger, lifts)
    curve = assemble_and_pade([cl.factor for cl in lifts], bigger, u)
    return curve, lifts, bigger
