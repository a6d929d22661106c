"""The second deformation F = f + (1 - T) g and the cleanup at T = 1.

The fiber of F at T = 0 is the perturbed system h = f + g, whose geometric
solution comes out of the polyhedral stage. It is lifted over Q[[T]] with the
same Newton kernel, recovered in Q(T) by Pade approximation, and specialized
at T = 1. There the minimal polynomial can lose degree (branches running off
to infinity) and acquire repeated roots (multiple solutions of f); both are
removed.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .arith import UniPoly, modular_inverse, poly_gcd
from .arith.jet import Jet
from .arith.pade import RationalFunction
from .arith.series import MonicModulus
from .errors import DivisionNotExact, NotSeparating, PadeDegenerate
from .geometry import height_bound_Eprime
from .lifting.assembly import CurveSolution, Laurent, recover_rational
from .lifting.deformation import TPoly, second_deformation
from .lifting.newton import SeriesGeometricSolution, lift_to, newton_lift_stage1
from .system import GeometricSolution0D, SparseSystem, substitute_mod

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SecondDeformation:
    """F_i = f_i + (1 - T) g_i together with its height bound E'."""

    F: Tuple[TPoly, ...]
    Eprime: int

    @classmethod
    def build(cls, f: SparseSystem, g: SparseSystem) -> "SecondDeformation":
        return cls(second_deformation(f, g), height_bound_Eprime(f.family()))


@dataclass(frozen=True)
class Cleanup:
    """Result of the T = 1 specialization.

    ``escaped`` counts branches whose limit at T = 1 is at infinity (the
    degree lost by the leading coefficient); ``merged`` counts the degree
    removed by the multiplicity gcd.
    """

    solution: GeometricSolution0D
    escaped: int
    merged: int


def _recover(sol: SeriesGeometricSolution, bound: int) -> CurveSolution:
    d = sol.degree
    mod = MonicModulus(sol.m)
    dm = sol.m.derivative_y()
    top = 2 * bound

    def laurent(row, den):
        return Laurent(0, tuple(row[k] if k < len(row) else 0 for k in range(top + 1)), den)

    m_series = [laurent(sol.m.rows[j], sol.m.den) for j in range(d + 1)]
    v_series = []
    for w in sol.w:
        vk = mod.mul(dm, w)
        v_series.extend(laurent(vk.rows[j], vk.den) if j < len(vk.rows) else Laurent(0, (0,) * (top + 1))
                        for j in range(d))
    flat = recover_rational(m_series + v_series, bound)
    vs = tuple(tuple(flat[d + 1 + k * d: d + 1 + (k + 1) * d]) for k in range(len(sol.w)))
    return CurveSolution(u=tuple(sol.u), m_hat=tuple(flat[: d + 1]), v=vs, bound=bound)


def formal_newton_lift(sol1: GeometricSolution0D, deformation: SecondDeformation,
                       slack: int = 0) -> Tuple[CurveSolution, SeriesGeometricSolution]:
    """Geometric solution of the curve F = 0 through the fiber ``sol1`` at T = 0.

    Lifts to precision 2 E' and recovers every coefficient with numerator and
    denominator degree at most E'. On a Pade failure and ``slack > 0``, the
    lift is extended once to 2 (E' + slack).
    """
    bound = deformation.Eprime
    series = newton_lift_stage1(sol1, deformation.F, 2 * bound)
    try:
        return _recover(series, bound), series
    except PadeDegenerate:
        if slack <= 0:
            raise
        log.info("Pade recovery failed at E' = %d; extending by %d", bound, slack)
    bound += slack
    series = lift_to(deformation.F, series, 2 * bound)
    return _recover(series, bound), series


def _common_denominator(funcs: Sequence[RationalFunction]) -> UniPoly:
    acc = UniPoly([Fraction(1)])
    for r in funcs:
        g = poly_gcd(acc, r.den)
        acc = (acc * r.den).exact_div(g).monic()
    return acc


def _times_at_one(r: RationalFunction, Q: UniPoly) -> Fraction:
    """(Q r)(1) for a polynomial Q divisible by the denominator of r."""
    return Fraction((r.num * Q.exact_div(r.den))(Fraction(1)))


def specialize_and_cleanup(curve: CurveSolution, f: SparseSystem) -> Cleanup:
    """Fiber of the curve at T = 1 with multiplicities removed, in direct form.

    The coefficients are cleared of denominators first, so branches escaping
    to infinity only lower the Y-degree. The curve's parametrizations are the
    Lambda-derivatives v_k = -dm/dLambda_k, so the T = 1 polynomial is carried
    as a jet; making it monic over jets keeps v consistent with the
    truncated minimal polynomial.
    """
    n = len(curve.u)
    D = curve.degree
    Q = _common_denominator(list(curve.m_hat) + [c for vk in curve.v for c in vk])
    coeffs: List[Jet] = []
    for j in range(D + 1):
        value = _times_at_one(curve.m_hat[j], Q)
        grad = [-_times_at_one(curve.v[k][j], Q) if j < D else Fraction(0) for k in range(n)]
        coeffs.append(Jet(value, grad))
    while coeffs and coeffs[-1].value == 0:
        if any(g != 0 for g in coeffs[-1].grad):
            raise NotSeparating("leading coefficient at T = 1 vanishes only for this linear form")
        coeffs.pop()
    escaped = D - (len(coeffs) - 1)
    lc_inv = coeffs[-1].inverse()
    monic = [c * lc_inv for c in coeffs]
    m1 = UniPoly([c.value for c in monic])
    v1 = [UniPoly([-c.grad[k] for c in monic[:-1]]) for k in range(n)]

    a = poly_gcd(m1, m1.derivative())
    try:
        m_red = m1.exact_div(a)
        dm_red = m1.derivative().exact_div(a)
        vq = [vk.exact_div(a) for vk in v1]
    except ArithmeticError:
        raise DivisionNotExact("the multiplicity gcd does not divide the parametrizations") from None
    merged = m1.degree - m_red.degree
    if m_red.degree == 0:
        ws: Tuple[UniPoly, ...] = tuple(UniPoly() for _ in range(n))
    else:
        dinv = modular_inverse(dm_red, m_red)
        ws = tuple((vk * dinv) % m_red for vk in vq)
    sol = GeometricSolution0D(tuple(curve.u), m_red, ws)
    if merged:
        # Clustered roots of m(1, Y) are only meaningful if u separates the
        # distinct solutions; a failure here is a bad linear form.
        if any(not substitute_mod(fi, ws, m_red).is_zero() for fi in f.polynomials):
            raise NotSeparating("linear form merges distinct solutions at T = 1")
    if escaped:
        log.info("%d branch(es) of the second deformation escape to infinity at T = 1", escaped)
    return Cleanup(sol, escaped, merged)
