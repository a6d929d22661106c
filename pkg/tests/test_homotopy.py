from fractions import Fraction

import pytest

from sparsegeo.arith import UniPoly, is_squarefree
from sparsegeo.arith.pade import RationalFunction
from sparsegeo.homotopy import SecondDeformation, formal_newton_lift, specialize_and_cleanup
from sparsegeo.lifting.assembly import CurveSolution
from sparsegeo.system import GeometricSolution0D, SparsePoly, SparseSystem, verify


def P(*coeffs):
    return UniPoly([Fraction(c) for c in coeffs])


def univariate(*coeffs) -> SparseSystem:
    pts = tuple((k,) for k in range(len(coeffs)))
    return SparseSystem(1, (SparsePoly(pts, tuple(Fraction(c) for c in coeffs)),))


def monic_fiber(*coeffs) -> GeometricSolution0D:
    m = P(*coeffs).monic()
    return GeometricSolution0D((Fraction(1),), m, (P(0, 1),))


def test_linear_deformation():
    f, g = univariate(-2, 1), univariate(1, 0)
    deformation = SecondDeformation.build(f, g)
    assert deformation.Eprime == 1
    curve, _ = formal_newton_lift(monic_fiber(-1, 1), deformation)
    assert curve.m_hat == (RationalFunction(P(-1, -1)), RationalFunction(P(1)))
    out = specialize_and_cleanup(curve, f)
    assert out.solution.m == P(-2, 1)
    assert (out.escaped, out.merged) == (0, 0)


def test_quadratic_deformation():
    # F = x^2 - 4 - 5 (1 - T) = x^2 - (9 - 5T)
    f, g = univariate(-4, 0, 1), univariate(-5, 0, 0)
    curve, _ = formal_newton_lift(monic_fiber(-9, 0, 1), SecondDeformation.build(f, g))
    assert curve.m_hat[0] == RationalFunction(P(-9, 5))
    assert curve.height() <= 1
    assert specialize_and_cleanup(curve, f).solution.m == P(-4, 0, 1)


def test_constant_curve_passes_through():
    curve = CurveSolution((Fraction(1),), (RationalFunction(P(2)), RationalFunction(P(-3)), RationalFunction(P(1))),
                          ((RationalFunction(P(-4)), RationalFunction(P(3))),), 0)
    out = specialize_and_cleanup(curve, univariate(2, -3, 1))
    assert out.solution.m == P(2, -3, 1)
    assert out.solution.w == (P(0, 1),)


def test_double_root_is_merged():
    # f = (x - 1)^2 (x - 2), perturbed by g = 1 + x + x^2 + x^3
    f = univariate(-2, 5, -4, 1)
    g = univariate(1, 1, 1, 1)
    h = univariate(-1, 6, -3, 2)
    curve, _ = formal_newton_lift(monic_fiber(-1, 6, -3, 2), SecondDeformation.build(f, g))
    out = specialize_and_cleanup(curve, f)
    assert out.merged == 1 and out.escaped == 0
    assert out.solution.m == P(2, -3, 1)
    assert is_squarefree(out.solution.m)
    assert verify(out.solution, f)
    assert verify(monic_fiber(-1, 6, -3, 2), h)


def test_escaping_branch():
    # the declared cubic term of f is zero, so one branch runs off to infinity
    f = univariate(2, -3, 1, 0)
    g = univariate(1, 1, 1, 1)
    curve, _ = formal_newton_lift(monic_fiber(3, -2, 2, 1), SecondDeformation.build(f, g), slack=1)
    out = specialize_and_cleanup(curve, f)
    assert out.escaped == 1
    assert out.solution.m == P(2, -3, 1)


@pytest.mark.parametrize("mult", [2, 3])
def test_cleanup_divides_parametrizations(mult):
    # f = x^mult (x + 1): the multiplicity gcd is Y^(mult - 1)
    coeffs = [0] * (mult + 2)
    coeffs[mult], coeffs[mult + 1] = 1, 1
    f = univariate(*coeffs)
    g = univariate(*([3] * (mult + 2)))
    h_coeffs = [a + b for a, b in zip(coeffs, [3] * (mult + 2))]
    curve, _ = formal_newton_lift(monic_fiber(*h_coeffs), SecondDeformation.build(f, g), slack=1)
    out = specialize_and_cleanup(curve, f)
    assert out.merged == mult - 1
    assert out.solution.m == P(0, 1, 1)
    assert verify(out.solution, f)
