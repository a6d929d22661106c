from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsegeo.arith import (
    UniPoly,
    bivariate_resultant_by_interpolation,
    charpoly_mod,
    format_rational,
    is_squarefree,
    modular_inverse,
    poly_eea_gcd,
    poly_gcd,
    resultant_univariate,
    to_rational,
)
from sparsegeo.arith.series import TruncatedSeries, kronecker_mul
from sparsegeo.errors import NotCoprime

Y = sympy.Symbol("Y")


def P(*coeffs):
    return UniPoly([Fraction(c) for c in coeffs])


def to_sympy(p: UniPoly):
    return sum(sympy.Rational(c.numerator, c.denominator) * Y ** i for i, c in enumerate(p.coeffs))


small = st.integers(-20, 20)
polys = st.lists(small, min_size=1, max_size=7).map(lambda cs: P(*cs))


# --- rationals ----------------------------------------------------------------

def test_rational_round_trip():
    for x in [Fraction(0), Fraction(-3), Fraction(7, 12), Fraction(-1, 10 ** 30)]:
        assert to_rational(format_rational(x)) == x
    assert format_rational(Fraction(5)) == "5"
    assert format_rational(Fraction(-1, 2)) == "-1/2"


@given(st.fractions())
def test_rational_strings_exact(x):
    assert to_rational(format_rational(x)) == x


# --- gcd ----------------------------------------------------------------------

def test_gcd_examples():
    assert poly_eea_gcd(P(-1, 0, 1), P(-1, 1))[0] == P(-1, 1)
    assert poly_eea_gcd(P(0, 0, 1), UniPoly())[0] == P(0, 0, 1)
    # Y^2 - 3Y + 2 = (Y-1)(Y-2) and Y^2 - 1 = (Y-1)(Y+1)
    assert poly_eea_gcd(P(2, -3, 1), P(-1, 0, 1))[0] == P(-1, 1)


@given(polys, polys)
def test_eea_bezout_identity(a, b):
    if a.is_zero() and b.is_zero():
        return
    g, s, t = poly_eea_gcd(a, b)
    assert s * a + t * b == g
    assert g.lc() == 1


@given(polys, polys, polys)
@settings(max_examples=60)
def test_gcd_matches_sympy(a, b, c):
    a, b = a * c, b * c
    if a.is_zero() or b.is_zero():
        return
    expected = sympy.Poly(sympy.gcd(to_sympy(a), to_sympy(b)), Y, domain="QQ").monic()
    got = poly_gcd(a, b)
    assert [Fraction(int(c.p), int(c.q)) for c in reversed(expected.all_coeffs())] == list(got.coeffs)


def test_gcd_rational_coefficients():
    a = P(Fraction(1, 3), Fraction(-5, 6), Fraction(1, 3))  # (Y - 2)(Y - 1/2) / 3
    b = P(Fraction(-1, 2), 1)
    assert poly_gcd(a, b) == P(Fraction(-1, 2), 1)


# --- resultants ---------------------------------------------------------------

def sympylvester(a: UniPoly, b: UniPoly) -> sympy.Matrix:
    """Sylvester matrix, highest coefficients first, as a sympy matrix."""
    da, db = a.degree, b.degree
    ra = [sympy.Rational(c.numerator, c.denominator) for c in reversed(a.coeffs)]
    rb = [sympy.Rational(c.numerator, c.denominator) for c in reversed(b.coeffs)]
    size = da + db
    rows = [[0] * i + ra + [0] * (size - da - 1 - i) for i in range(db)]
    rows += [[0] * i + rb + [0] * (size - db - 1 - i) for i in range(da)]
    return sympy.Matrix(rows)


def test_resultant_examples():
    assert resultant_univariate(P(-2, 1), P(-1, 0, 1)) == 3
    assert resultant_univariate(P(-1, 0, 1), P(-1, 0, 1)) == 0
    # Sylvester determinant of Y^2 - 2 and Y^2 - 3, frozen from sympy
    assert resultant_univariate(P(-2, 0, 1), P(-3, 0, 1)) == 1


@given(polys, polys)
@settings(max_examples=60)
def test_resultant_matches_sympy(a, b):
    if a.degree < 1 or b.degree < 1:
        return
    expected = sympylvester(a, b).det()
    assert resultant_univariate(a, b) == Fraction(int(sympy.numer(expected)), int(sympy.denom(expected)))


def test_resultant_sign_convention():
    # Res(Y - 2, Y^3 + 1) = b(2) = 9; sympy.resultant returns -9 for this order
    assert resultant_univariate(P(-2, 1), P(1, 0, 0, 1)) == 9


def test_bivariate_resultant_examples():
    # a[i] is the coefficient of Y^i, a polynomial in Z
    a = [P(0, -1), P(1)]                       # Y - Z
    assert bivariate_resultant_by_interpolation(a, P(-1, 0, 1), 2) == P(-1, 0, 1)
    a = [P(0, -2), P(1)]                       # Y - 2Z
    r = bivariate_resultant_by_interpolation(a, P(-3, 1), 1)
    # Res_Z(Y - 2Z, Z - 3) = -2 (Y/2 - 3); the other argument order gives Y - 6
    assert r == P(6, -1)
    assert r.monic() == P(-6, 1)
    a = [P(0, -1, -1), P(1)]                   # Y - Z - Z^2
    assert bivariate_resultant_by_interpolation(a, P(-2, 0, 1), 2) == P(2, -4, 1)


# --- modular inverse and characteristic polynomials ---------------------------

def test_modular_inverse_examples():
    assert modular_inverse(P(0, 1), P(-1, 1)) == P(1)
    inv = modular_inverse(P(1, 1), P(-2, 0, 1))
    assert inv == P(-1, 1)
    with pytest.raises(NotCoprime):
        modular_inverse(P(-1, 1), P(-1, 0, 1))


@given(polys, st.lists(st.integers(-6, 6), min_size=2, max_size=5, unique=True))
def test_modular_inverse_property(a, roots):
    m = UniPoly.from_roots([Fraction(r) for r in roots])
    a = a % m
    if any(a(Fraction(r)) == 0 for r in roots):
        return
    inv = modular_inverse(a, m)
    assert (a * inv) % m == P(1)


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=5), polys)
def test_charpoly_has_image_roots(roots, ell):
    m = UniPoly.from_roots([Fraction(r) for r in roots])
    ell = ell % m
    expected = UniPoly.from_roots([ell(Fraction(r)) for r in roots])
    assert charpoly_mod(ell, m) == expected


def test_squarefree():
    assert is_squarefree(P(2, -3, 1))
    assert not is_squarefree(P(-2, 5, -4, 1))  # (Y - 1)^2 (Y - 2)


# --- series -------------------------------------------------------------------

def naive_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@given(st.lists(st.integers(-10 ** 40, 10 ** 40), min_size=1, max_size=30),
       st.lists(st.integers(-10 ** 40, 10 ** 40), min_size=1, max_size=30))
def test_kronecker_matches_schoolbook(a, b):
    got = kronecker_mul(a, b)
    want = naive_mul(a, b)
    assert got + [0] * (len(want) - len(got)) == want


def test_kronecker_large_operands():
    a = [(-1) ** i * (3 ** 500 + i) for i in range(300)]
    b = [7 ** 300 - i for i in range(200)]
    assert kronecker_mul(a, b) == naive_mul(a, b)


fractions = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 100)


@given(st.lists(fractions, min_size=1, max_size=8), st.lists(fractions, min_size=1, max_size=8))
def test_series_product(a, b):
    prec = 6
    sa = TruncatedSeries.from_coefficients(a, prec)
    sb = TruncatedSeries.from_coefficients(b, prec)
    want = naive_mul(a + [0] * (prec + 1), b + [0] * (prec + 1))[: prec + 1]
    assert (sa * sb).coefficients == want


@given(st.lists(fractions, min_size=1, max_size=8))
def test_series_inverse(a):
    if a[0] == 0:
        return
    prec = 7
    s = TruncatedSeries.from_coefficients(a, prec)
    one = s * s.inverse()
    assert one.coefficients == [1] + [0] * prec


def test_geometric_series_inverse():
    s = TruncatedSeries.from_coefficients([1, -1], 5)
    assert s.inverse().coefficients == [1] * 6
