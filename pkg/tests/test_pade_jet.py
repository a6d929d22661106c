from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsegeo.arith import UniPoly, jet_lift_minpoly_algorithm
from sparsegeo.arith.jet import Jet
from sparsegeo.arith.pade import (
    RationalFunction,
    _pade_exact,
    pade_approximant,
    rational_reconstruction,
)
from sparsegeo.arith.series import TruncatedSeries
from sparsegeo.errors import PadeDegenerate


def P(*coeffs):
    return UniPoly([Fraction(c) for c in coeffs])


def series_of(coeffs, prec):
    return TruncatedSeries.from_coefficients([Fraction(c) for c in coeffs], prec)


def test_pade_geometric_series():
    r = pade_approximant(series_of([1, 1, 1, 1, 1], 4), 0, 1)
    assert r == RationalFunction(P(1), P(1, -1))


def test_pade_constant():
    r = pade_approximant(series_of([3, 0, 0, 0, 0], 4), 0, 0)
    assert r == RationalFunction(P(3))


def test_pade_first_order():
    target = RationalFunction(P(1, 1), P(1, -2))
    s = target.series(4)
    # (1 + T)/(1 - 2T) = 1 + 3T + 6T^2 + 12T^3 + 24T^4
    assert s.coefficients == [1, 3, 6, 12, 24]
    assert pade_approximant(s, 1, 1) == target


def test_pade_without_solution():
    with pytest.raises(PadeDegenerate):
        pade_approximant(series_of([0, 1], 1), 0, 1)


def test_rational_function_is_reduced():
    # (Y^2 - 1) / (3 (Y - 1)(Y - 2)) = ((Y + 1) / 3) / (Y - 2)
    r = RationalFunction(P(-1, 0, 1), P(2, -3, 1).scale(3))
    assert r.num == P(1, 1).scale(Fraction(1, 3))
    assert r.den == P(-2, 1)


rationals = st.fractions(max_denominator=10 ** 6).filter(lambda x: abs(x) < 10 ** 6)


@st.composite
def rational_functions(draw, max_deg=6):
    num = draw(st.lists(rationals, min_size=1, max_size=max_deg + 1))
    den = [Fraction(1)] + draw(st.lists(rationals, max_size=max_deg))
    return RationalFunction(UniPoly(num), UniPoly(den))


@given(rational_functions())
@settings(max_examples=100, deadline=None)
def test_pade_round_trip(r):
    assert pade_approximant(r.series(12), 6, 6) == r


@given(rational_functions(max_deg=4))
@settings(max_examples=40, deadline=None)
def test_modular_and_exact_paths_agree(r):
    s = r.series(8)
    assert pade_approximant(s, 4, 4) == _pade_exact(list(s.nums[:9]), s.den, 4, 4, 9)


@given(st.integers(-10 ** 9, 10 ** 9), st.integers(1, 10 ** 9))
def test_rational_reconstruction(a, b):
    x = Fraction(a, b)
    m = (1 << 61) - 1
    m = m * m
    residue = x.numerator * pow(x.denominator, -1, m) % m
    assert rational_reconstruction(residue, m) == x


# --- jets -----------------------------------------------------------------------

def point_set_minpoly(points):
    """The procedure lam -> prod over points of (Y - <lam, p>), usable over jets."""
    def algorithm(lam):
        out = UniPoly([1])
        for p in points:
            value = sum((l * Fraction(c) for l, c in zip(lam, p)), Jet.constant(0, len(lam)))
            out = out * UniPoly([-value, 1])
        return out
    return algorithm


def test_jet_identity_parametrization():
    m, ws = jet_lift_minpoly_algorithm(point_set_minpoly([(1,), (2,)]), [1])
    assert m == P(2, -3, 1)
    assert ws == [P(0, 1)]


def test_jet_interpolates_second_coordinate():
    m, ws = jet_lift_minpoly_algorithm(point_set_minpoly([(1, 1), (2, 3)]), [1, 0])
    assert m == P(2, -3, 1)
    assert ws[0] == P(0, 1)
    assert ws[1] == P(-1, 2)


@given(st.lists(st.integers(-5, 5), min_size=3, max_size=3), st.lists(st.integers(1, 9), min_size=3, max_size=3))
def test_jet_single_point(p, u):
    m, ws = jet_lift_minpoly_algorithm(point_set_minpoly([p]), u)
    assert m == P(-sum(a * b for a, b in zip(u, p)), 1)
    assert [w(Fraction(0)) for w in ws] == [Fraction(c) for c in p]


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=5, unique=True))
def test_jet_parametrizations_recover_points(points):
    u = [1, 11]  # separates any two distinct points of the box
    m, ws = jet_lift_minpoly_algorithm(point_set_minpoly(points), u)
    for p in points:
        y = Fraction(u[0] * p[0] + u[1] * p[1])
        assert m(y) == 0
        assert (ws[0](y), ws[1](y)) == p


def test_jet_arithmetic():
    a = Jet.variable(Fraction(2), 0, 2)
    b = Jet.variable(Fraction(3), 1, 2)
    c = a * b + a
    assert c.value == 8
    assert list(c.grad) == [4, 2]
    inv = a.inverse()
    assert inv.value == Fraction(1, 2)
    assert list(inv.grad) == [Fraction(-1, 4), 0]
