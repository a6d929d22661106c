"""Rational numbers.

``fractions.Fraction`` already keeps every value reduced with a positive
denominator, so it is used directly as the rational type. This module only
adds parsing and formatting for the ``"p/q"`` text form used in files.
"""

from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[int, str, Fraction]


def to_rational(x: RationalLike) -> Fraction:
    """Convert an int, a Fraction or a ``"p/q"`` string to a Fraction.

    Floats are rejected: they would silently smuggle rounding into exact code.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a 'p/q' string instead")
    if isinstance(x, str):
        text = x.strip()
        if not text:
            raise ValueError("empty rational literal")
        return Fraction(text)
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    """Canonical text form: ``"p/q"`` with q > 0, or ``"p"`` when q == 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
