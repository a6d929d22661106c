"""Truncated power series in T, alone or as coefficients of polynomials in Y.

Both containers store integer numerators over one common positive
denominator, kept reduced after every operation. Products are computed by
Kronecker substitution: the integer numerators are packed into one big
integer, multiplied once, and unpacked. This moves the quadratic inner loop
into the big-integer multiplier, which is GMP's (through gmpy2) for large
operands.

Precision semantics: a series with ``prec == s`` is known modulo T^(s+1).
Binary operations on operands of different precision truncate to the
smaller one; the event is logged at debug level.
"""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..errors import SeriesNotInvertible

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - plain Python integers still work
    _mpz = None

log = logging.getLogger(__name__)


# --- Kronecker substitution -------------------------------------------------


def _slot_bytes(max_a: int, max_b: int, terms: int) -> int:
    bound = max_a * max_b * max(terms, 1)
    return (bound.bit_length() + 1 + 7) // 8


def _pack(vals: Sequence[int], nbytes: int) -> int:
    zero = bytes(nbytes)
    pos = b"".join(v.to_bytes(nbytes, "little") if v > 0 else zero for v in vals)
    neg = b"".join((-v).to_bytes(nbytes, "little") if v < 0 else zero for v in vals)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(x: int, nslots: int, nbytes: int) -> List[int]:
    total = nslots * nbytes
    if x < 0:
        x += 1 << (8 * total)
    raw = x.to_bytes(total, "little")
    half = 1 << (8 * nbytes - 1)
    full = 1 << (8 * nbytes)
    out = []
    carry = 0
    frm = int.from_bytes
    for k in range(0, total, nbytes):
        d = frm(raw[k:k + nbytes], "little") + carry
        if d >= half:
            out.append(d - full)
            carry = 1
        else:
            out.append(d)
            carry = 0
    return out


def kronecker_mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    """Full product of two integer coefficient lists."""
    if not a or not b:
        return []
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * (len(a) + len(b) - 1)
    nb = _slot_bytes(ma, mb, min(len(a), len(b)))
    if len(a) <= 4 or len(b) <= 4:
        if _mpz is not None and nb > 512:
            a, b = [_mpz(x) for x in a], [_mpz(x) for x in b]
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return [int(x) for x in out]
    n_out = len(a) + len(b) - 1
    pa, pb = _pack(a, nb), _pack(b, nb)
    if _mpz is not None and nb * min(len(a), len(b)) > 2048:
        prod = int(_mpz(pa) * _mpz(pb))
    else:
        prod = pa * pb
    return _unpack(prod, n_out, nb)


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def _normalize(nums: List[int], den: int) -> Tuple[List[int], int]:
    if den < 0:
        nums = [-x for x in nums]
        den = -den
    g = den
    for x in nums:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return nums, den
    if g > 1:
        nums = [x // g for x in nums]
        den //= g
    return nums, den


def _scalar_parts(c) -> Tuple[int, int]:
    c = Fraction(c)
    return c.numerator, c.denominator


# --- scalar series ----------------------------------------------------------


class TruncatedSeries:
    """Power series in T known modulo T^(prec+1)."""

    __slots__ = ("nums", "den", "prec")

    def __init__(self, nums: Sequence[int], den: int, prec: int):
        if prec < 0:
            raise ValueError("precision must be non-negative")
        nums = list(nums[: prec + 1])
        if len(nums) < prec + 1:
            nums.extend([0] * (prec + 1 - len(nums)))
        self.nums, self.den = _normalize(nums, den)
        self.prec = prec

    @classmethod
    def from_coefficients(cls, coeffs: Sequence, prec: Optional[int] = None) -> "TruncatedSeries":
        coeffs = [Fraction(c) for c in coeffs]
        if prec is None:
            prec = max(len(coeffs) - 1, 0)
        coeffs = coeffs[: prec + 1]
        den = 1
        for c in coeffs:
            den = _lcm(den, c.denominator)
        return cls([c.numerator * (den // c.denominator) for c in coeffs], den, prec)

    @classmethod
    def constant(cls, c, prec: int) -> "TruncatedSeries":
        p, q = _scalar_parts(c)
        return cls([p], q, prec)

    @property
    def coefficients(self) -> List[Fraction]:
        return [Fraction(x, self.den) for x in self.nums]

    @property
    def order_bound(self) -> int:
        return self.prec

    def __getitem__(self, i: int) -> Fraction:
        if i > self.prec:
            raise IndexError("coefficient beyond the known precision")
        return Fraction(self.nums[i], self.den)

    def valuation(self) -> Optional[int]:
        """Index of the first nonzero coefficient, None for the zero approximant."""
        for i, x in enumerate(self.nums):
            if x:
                return i
        return None

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_unit(self) -> bool:
        return self.nums[0] != 0

    def zero_like(self) -> "TruncatedSeries":
        return TruncatedSeries([], 1, self.prec)

    def truncate(self, prec: int) -> "TruncatedSeries":
        if prec > self.prec:
            raise ValueError("truncate cannot raise precision; use extend")
        return TruncatedSeries(self.nums, self.den, prec)

    def extend(self, prec: int) -> "TruncatedSeries":
        """Pad with zeros to a higher precision (the caller asserts this is meaningful)."""
        return TruncatedSeries(self.nums, self.den, max(prec, self.prec))

    def _common(self, other: "TruncatedSeries") -> int:
        if other.prec != self.prec:
            log.debug("series precision mismatch %d vs %d, truncating", self.prec, other.prec)
        return min(self.prec, other.prec)

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self.prec)

    def __add__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        prec = self._common(other)
        g = math.gcd(self.den, other.den)
        fa, fb = other.den // g, self.den // g
        nums = [x * fa + y * fb for x, y in zip(self.nums[: prec + 1], other.nums[: prec + 1])]
        return TruncatedSeries(nums, self.den * fa, prec)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-x for x in self.nums], self.den, self.prec)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            p, q = _scalar_parts(other)
            return TruncatedSeries([x * p for x in self.nums], self.den * q, self.prec)
        prec = self._common(other)
        nums = kronecker_mul(self.nums[: prec + 1], other.nums[: prec + 1])[: prec + 1]
        return TruncatedSeries(nums, self.den * other.den, prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by T^k (k >= 0), keeping the precision."""
        if k < 0:
            raise ValueError("negative shift")
        return TruncatedSeries([0] * k + self.nums, self.den, self.prec)

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse by Newton iteration b <- b (2 - a b)."""
        if not self.nums[0]:
            raise SeriesNotInvertible("constant term is zero")
        b = TruncatedSeries([self.den], self.nums[0], 0)
        k = 0
        while k < self.prec:
            k = min(2 * k + 1, self.prec)
            a = self.truncate(k)
            b = b.extend(k)
            b = b * (2 - a * b)
        return b

    def __truediv__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __rtruediv__(self, other) -> "TruncatedSeries":
        return self.inverse() * Fraction(other)

    def evaluate(self, t) -> Fraction:
        """Value of the truncated polynomial at a rational ``t``."""
        acc = 0
        for x in reversed(self.nums):
            acc = acc * t + x
        return Fraction(acc) / self.den

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedSeries):
            prec = min(self.prec, other.prec)
            a, b = self.truncate(prec), other.truncate(prec)
            return a.nums == b.nums and a.den == b.den
        c = Fraction(other)
        return self.nums[0] * c.denominator == c.numerator * self.den and not any(self.nums[1:])

    def __hash__(self):
        return hash((tuple(self.nums), self.den, self.prec))

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.coefficients!r}, prec={self.prec})"


# --- polynomials in Y with series coefficients ------------------------------


class SeriesPoly:
    """Element of Q[[T]][Y], each coefficient known modulo T^(prec+1).

    ``rows[j]`` holds the numerators of the coefficient of Y^j; all rows
    share ``den`` and have length ``prec + 1``. Trailing zero rows are
    dropped, so ``degree`` is -1 for the zero element.
    """

    __slots__ = ("rows", "den", "prec")

    def __init__(self, rows: Sequence[Sequence[int]], den: int, prec: int, _trusted: bool = False):
        if _trusted:
            self.rows, self.den, self.prec = rows, den, prec
            return
        width = prec + 1
        rs = []
        for r in rows:
            r = list(r[:width])
            if len(r) < width:
                r.extend([0] * (width - len(r)))
            rs.append(r)
        while rs and not any(rs[-1]):
            rs.pop()
        if den < 0:
            rs = [[-x for x in r] for r in rs]
            den = -den
        flat = [x for r in rs for x in r if x]
        g = math.gcd(den, *flat) if flat else den
        if g > 1:
            rs = [[x // g for x in r] for r in rs]
            den //= g
        self.rows: List[List[int]] = rs
        self.den = den
        self.prec = prec

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, prec: int) -> "SeriesPoly":
        return cls([], 1, prec)

    @classmethod
    def from_unipoly(cls, p, prec: int) -> "SeriesPoly":
        """Embed a polynomial with rational (constant in T) coefficients."""
        coeffs = [Fraction(c) for c in p.coeffs]
        den = 1
        for c in coeffs:
            den = _lcm(den, c.denominator)
        rows = [[c.numerator * (den // c.denominator)] for c in coeffs]
        return cls(rows, den, prec)

    @classmethod
    def from_series(cls, coeffs: Sequence[TruncatedSeries], prec: Optional[int] = None) -> "SeriesPoly":
        if prec is None:
            prec = min((c.prec for c in coeffs), default=0)
        den = 1
        for c in coeffs:
            den = _lcm(den, c.den)
        rows = [[x * (den // c.den) for x in c.nums[: prec + 1]] for c in coeffs]
        return cls(rows, den, prec)

    @classmethod
    def from_fraction_rows(cls, rows: Sequence[Sequence], prec: int) -> "SeriesPoly":
        den = 1
        for r in rows:
            for c in r:
                den = _lcm(den, Fraction(c).denominator)
        ints = [[(Fraction(c) * den).numerator for c in r] for r in rows]
        return cls(ints, den, prec)

    # queries ----------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.rows) - 1

    def is_zero(self) -> bool:
        return not self.rows

    def coefficient(self, j: int) -> TruncatedSeries:
        if j >= len(self.rows) or j < 0:
            return TruncatedSeries([], 1, self.prec)
        return TruncatedSeries(self.rows[j], self.den, self.prec)

    def coefficients(self) -> List[TruncatedSeries]:
        return [self.coefficient(j) for j in range(len(self.rows))]

    def entry(self, j: int, i: int) -> Fraction:
        """Coefficient of Y^j T^i."""
        if j >= len(self.rows) or i > self.prec:
            return Fraction(0)
        return Fraction(self.rows[j][i], self.den)

    def is_monic(self) -> bool:
        if not self.rows:
            return False
        top = self.rows[-1]
        return top[0] == self.den and not any(top[1:])

    def at_zero(self):
        """Reduction modulo T, as a rational polynomial."""
        from .poly import UniPoly
        return UniPoly([Fraction(r[0], self.den) for r in self.rows])

    def evaluate_t(self, t) -> "object":
        """Substitute a rational value for T in the truncated representation."""
        from .poly import UniPoly
        t = Fraction(t)
        out = []
        for r in self.rows:
            acc = Fraction(0)
            for x in reversed(r):
                acc = acc * t + x
            out.append(acc / self.den)
        return UniPoly(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesPoly):
            return NotImplemented
        return self.prec == other.prec and self.den == other.den and self.rows == other.rows

    def __hash__(self):
        return hash((tuple(map(tuple, self.rows)), self.den, self.prec))

    def __repr__(self) -> str:
        return f"SeriesPoly(deg={self.degree}, prec={self.prec}, coeffs={[c.coefficients for c in self.coefficients()]})"

    # precision --------------------------------------------------------------

    def truncate(self, prec: int) -> "SeriesPoly":
        if prec > self.prec:
            raise ValueError("truncate cannot raise precision; use extend")
        if prec == self.prec:
            return self
        return SeriesPoly([r[: prec + 1] for r in self.rows], self.den, prec)

    def extend(self, prec: int) -> "SeriesPoly":
        """Zero-pad to a higher precision (used when starting a Newton step)."""
        if prec <= self.prec:
            return self
        pad = [0] * (prec - self.prec)
        return SeriesPoly([r + pad for r in self.rows], self.den, prec, _trusted=True)

    # arithmetic -------------------------------------------------------------

    def _common(self, other: "SeriesPoly") -> int:
        if other.prec != self.prec:
            log.debug("series-poly precision mismatch %d vs %d, truncating", self.prec, other.prec)
        return min(self.prec, other.prec)

    def __add__(self, other: "SeriesPoly") -> "SeriesPoly":
        if not isinstance(other, SeriesPoly):
            return NotImplemented
        prec = self._common(other)
        w = prec + 1
        g = math.gcd(self.den, other.den)
        fa, fb = other.den // g, self.den // g
        n = max(len(self.rows), len(other.rows))
        zero = [0] * w
        rows = []
        for j in range(n):
            ra = self.rows[j] if j < len(self.rows) else zero
            rb = other.rows[j] if j < len(other.rows) else zero
            rows.append([x * fa + y * fb for x, y in zip(ra[:w], rb[:w])])
        return SeriesPoly(rows, self.den * fa, prec)

    def __neg__(self) -> "SeriesPoly":
        return SeriesPoly([[-x for x in r] for r in self.rows], self.den, self.prec, _trusted=True)

    def __sub__(self, other: "SeriesPoly") -> "SeriesPoly":
        return self + (-other)

    def scale(self, c) -> "SeriesPoly":
        """Multiply by a rational constant."""
        p, q = _scalar_parts(c)
        if p == 0:
            return SeriesPoly.zero(self.prec)
        return SeriesPoly([[x * p for x in r] for r in self.rows], self.den * q, self.prec)

    def mul_series(self, s: TruncatedSeries) -> "SeriesPoly":
        """Multiply every coefficient by the scalar series ``s``."""
        prec = min(self.prec, s.prec)
        other = SeriesPoly([s.nums[: prec + 1]], s.den, prec)
        return self * other

    def shift_t(self, k: int) -> "SeriesPoly":
        """Multiply by T^k (k >= 0), keeping the precision."""
        if k == 0:
            return self
        if k < 0:
            raise ValueError("negative T shift")
        w = self.prec + 1
        return SeriesPoly([([0] * k + r)[:w] for r in self.rows], self.den, self.prec)

    def shift_y(self, k: int) -> "SeriesPoly":
        """Multiply by Y^k."""
        if not self.rows or k == 0:
            return self
        zero = [0] * (self.prec + 1)
        return SeriesPoly([zero] * k + self.rows, self.den, self.prec, _trusted=True)

    def __mul__(self, other) -> "SeriesPoly":
        if not isinstance(other, SeriesPoly):
            return self.scale(other)
        prec = self._common(other)
        if not self.rows or not other.rows:
            return SeriesPoly.zero(prec)
        w = prec + 1
        da, db = len(self.rows), len(other.rows)
        if da == 1 and db == 1:
            nums = kronecker_mul(self.rows[0][:w], other.rows[0][:w])[:w]
            return SeriesPoly([nums], self.den * other.den, prec)
        stride = 2 * w - 1
        pad = [0] * (stride - w)
        fa = [x for r in self.rows for x in (r[:w] + pad)]
        fb = [x for r in other.rows for x in (r[:w] + pad)]
        prod = kronecker_mul(fa, fb)
        rows = []
        for j in range(da + db - 1):
            rows.append(prod[j * stride: j * stride + w])
        return SeriesPoly(rows, self.den * other.den, prec)

    __rmul__ = __mul__

    def derivative_y(self) -> "SeriesPoly":
        return SeriesPoly([[x * j for x in r] for j, r in enumerate(self.rows)][1:], self.den, self.prec)

    def reverse(self, length: int) -> "SeriesPoly":
        """Coefficient reversal Y^(length-1) p(1/Y); requires degree < length."""
        zero = [0] * (self.prec + 1)
        rows = [self.rows[j] if j < len(self.rows) else zero for j in range(length)]
        return SeriesPoly(rows[::-1], self.den, self.prec)

    def truncate_y(self, length: int) -> "SeriesPoly":
        """Keep the coefficients of Y^0 .. Y^(length-1)."""
        return SeriesPoly(self.rows[:length], self.den, self.prec)

    def to_unipoly(self):
        """Polynomial in Y with TruncatedSeries coefficients."""
        from .poly import UniPoly
        return UniPoly(self.coefficients())


class MonicModulus:
    """A monic polynomial m in Y over Q[[T]] with data for fast remainders.

    Remainders use the reversed-inverse trick: the quotient of a by m is read
    off rev(a) * rev(m)^(-1) mod Y^k, with the reversed inverse computed once
    by Newton iteration in Y.
    """

    def __init__(self, m: SeriesPoly):
        if not m.is_monic():
            raise ValueError("modulus must be monic")
        self.m = m
        self.d = m.degree
        self.prec = m.prec
        self._rev_inv = None
        self._rev_inv_len = 0

    def _reversed_inverse(self, length: int) -> SeriesPoly:
        if self._rev_inv is not None and self._rev_inv_len >= length:
            return self._rev_inv.truncate_y(length)
        rev = self.m.reverse(self.d + 1)
        # Newton: b <- b (2 - rev b) mod Y^k, starting from b = 1
        b = SeriesPoly([[1]], 1, self.prec)
        k = 1
        two = SeriesPoly([[2]], 1, self.prec)
        while k < length:
            k = min(2 * k, length)
            b = (b * (two - (rev.truncate_y(k) * b).truncate_y(k))).truncate_y(k)
        self._rev_inv = b
        self._rev_inv_len = length
        return b

    def reduce(self, a: SeriesPoly) -> SeriesPoly:
        d = self.d
        if a.degree < d:
            return a
        if d == 0:
            return SeriesPoly.zero(min(a.prec, self.prec))
        k = a.degree - d + 1
        inv = self._reversed_inverse(k)
        ra = a.reverse(a.degree + 1).truncate_y(k)
        q = (ra * inv).truncate_y(k).reverse(k)
        r = a - q * self.m
        return r.truncate_y(d)

    def mul(self, a: SeriesPoly, b: SeriesPoly) -> SeriesPoly:
        return self.reduce(a * b)

    def power_sums(self) -> List[TruncatedSeries]:
        """Newton power sums s_0..s_{d-1} of the roots of m."""
        from .poly import power_sums_of_roots
        return power_sums_of_roots(self.m.to_unipoly(), self.d)

    def trace(self, a: SeriesPoly, sums: Sequence[TruncatedSeries]) -> TruncatedSeries:
        acc = TruncatedSeries([], 1, min(a.prec, self.prec))
        for j in range(min(len(a.rows), self.d)):
            acc = acc + a.coefficient(j) * sums[j]
        return acc
