"""Exact arithmetic kernels: rationals, polynomials, series, jets, Pade."""

from .rational import Rational, format_rational, to_rational
from .poly import (
    UniPoly,
    Y,
    bivariate_resultant_by_interpolation,
    charpoly_mod,
    determinant,
    interpolate,
    is_squarefree,
    modular_inverse,
    poly_eea_gcd,
    poly_gcd,
    resultant_univariate,
)
from .jet import Jet, jet_lift_minpoly_algorithm, parametrizations_from_jet, seed_jets
from .series import MonicModulus, SeriesPoly, TruncatedSeries, kronecker_mul
from .pade import RationalFunction, pade_approximant
