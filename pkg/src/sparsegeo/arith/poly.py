"""Dense univariate polynomials over a commutative ring.

Coefficients are stored in ascending order. The ring is whatever the
coefficients implement: ``Fraction`` for ordinary rational polynomials,
:class:`~sparsegeo.arith.jet.Jet` when derivatives with respect to a linear
form are being tracked, or truncated power series. Division is only used
where the algorithm needs it, and then only by coefficients that the caller
guarantees (or checks) to be units.
"""

import math
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

from ..errors import JetSingular, NotCoprime, SeriesNotInvertible


def _is_zero(c) -> bool:
    return c == 0


def _is_unit(c) -> bool:
    """Whether ``c`` can be divided by. Rings other than Q expose ``is_unit``."""
    test = getattr(c, "is_unit", None)
    if test is not None:
        return test()
    return c != 0


class UniPoly:
    """Immutable dense polynomial in one variable (written Y in docstrings)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs: Tuple = tuple(cs)

    # construction ---------------------------------------------------------

    @classmethod
    def from_ints(cls, coeffs: Sequence) -> "UniPoly":
        return cls([Fraction(c) for c in coeffs])

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "UniPoly":
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Sequence) -> "UniPoly":
        """Monic polynomial with the given roots (with repetition)."""
        p = cls([Fraction(1)])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    # basic queries ----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "UniPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            terms.append(f"({c})" + ("" if i == 0 else f"*Y^{i}"))
        return "UniPoly(" + " + ".join(terms) + ")"

    # ring operations --------------------------------------------------------

    def __add__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        return self + (-other)

    def __rsub__(self, other) -> "UniPoly":
        return UniPoly([other]) - self

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if _is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return UniPoly(out)

    def __rmul__(self, other) -> "UniPoly":
        return UniPoly([other * c for c in self.coeffs])

    def __pow__(self, e: int) -> "UniPoly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = UniPoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c) -> "UniPoly":
        return UniPoly([c * x for x in self.coeffs])

    def shift(self, k: int) -> "UniPoly":
        """Multiply by Y^k."""
        if not self.coeffs:
            return self
        return UniPoly([0] * k + list(self.coeffs))

    def derivative(self) -> "UniPoly":
        return UniPoly([c * i for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Horner evaluation; ``x`` may live in any ring compatible with the coefficients."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def map_coeffs(self, f: Callable) -> "UniPoly":
        return UniPoly([f(c) for c in self.coeffs])

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        _require_unit(lc)
        inv = reciprocal(lc)
        return UniPoly([c * inv for c in self.coeffs[:-1]] + [1])

    def divmod(self, other: "UniPoly") -> Tuple["UniPoly", "UniPoly"]:
        """Euclidean division; the divisor's leading coefficient must be a unit."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        db = other.degree
        lc = other.lc()
        inv = None
        if lc != 1:
            _require_unit(lc)
            inv = reciprocal(lc)
        rem = list(self.coeffs)
        if len(rem) <= db:
            return UniPoly(), UniPoly(rem)
        quot = [0] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if _is_zero(c):
                continue
            q = c if inv is None else c * inv
            quot[k - db] = q
            for j in range(db + 1):
                rem[k - db + j] = rem[k - db + j] - q * bc[j]
        return UniPoly(quot), UniPoly(rem[:db])

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        """Quotient of an exact division. Raises ArithmeticError on a remainder."""
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q


def reciprocal(c):
    """1/c, keeping integers exact."""
    if isinstance(c, int):
        return Fraction(1, c)
    return 1 / c


def _require_unit(c) -> None:
    if _is_unit(c):
        return
    # pick the most specific error for the coefficient ring at hand
    name = type(c).__name__
    if name == "Jet":
        raise JetSingular(f"division by a jet with zero value: {c!r}")
    if name in ("TruncatedSeries",):
        raise SeriesNotInvertible(f"series with zero constant term: {c!r}")
    raise ZeroDivisionError(f"division by {c!r}")


Y = UniPoly([Fraction(0), Fraction(1)])


def poly_eea_gcd(a: UniPoly, b: UniPoly) -> Tuple[UniPoly, UniPoly, UniPoly]:
    """Extended Euclidean algorithm.

    Returns ``(g, s, t)`` with ``g`` the monic gcd and ``s*a + t*b == g``.
    Over jet coefficients a division by a jet with zero value raises
    :class:`JetSingular`.
    """
    if a.is_zero() and b.is_zero():
        return UniPoly(), UniPoly(), UniPoly()
    r0, r1 = a, b
    s0, s1 = UniPoly([1]), UniPoly()
    t0, t1 = UniPoly(), UniPoly([1])
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lc = r0.lc()
    _require_unit(lc)
    inv = reciprocal(lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


_GCD_PRIME = (1 << 61) - 1


def _is_rational(p: UniPoly) -> bool:
    return all(isinstance(c, (int, Fraction)) for c in p.coeffs)


def _primitive_integer(p: UniPoly) -> List[int]:
    """Integer multiple of ``p`` with content 1 and positive leading coefficient."""
    den = 1
    for c in p.coeffs:
        d = Fraction(c).denominator
        den = den * d // math.gcd(den, d)
    ints = [int(Fraction(c) * den) for c in p.coeffs]
    return _primitive(ints)


def _primitive(ints: List[int]) -> List[int]:
    while ints and ints[-1] == 0:
        ints.pop()
    if not ints:
        return ints
    g = math.gcd(*ints)
    if ints[-1] < 0:
        g = -g
    return [x // g for x in ints]


def _gcd_degree_mod(a: List[int], b: List[int], p: int) -> int:
    """Degree of gcd(a mod p, b mod p); an upper bound for the degree over Q."""
    r0 = [x % p for x in a]
    r1 = [x % p for x in b]
    while r1 and r1[-1] == 0:
        r1.pop()
    while r1:
        inv = pow(r1[-1], -1, p)
        db = len(r1) - 1
        while len(r0) - 1 >= db and r0:
            c = r0[-1] * inv % p
            shift = len(r0) - 1 - db
            for j in range(db + 1):
                r0[shift + j] = (r0[shift + j] - c * r1[j]) % p
            while r0 and r0[-1] == 0:
                r0.pop()
        r0, r1 = r1, r0
    return len(r0) - 1


def _pseudo_remainder(a: List[int], b: List[int]) -> List[int]:
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for j in range(db + 1):
            r[shift + j] -= c * b[j]
        while r and r[-1] == 0:
            r.pop()
    return r


def _integer_gcd(a: List[int], b: List[int]) -> List[int]:
    """Primitive remainder sequence."""
    if len(a) < len(b):
        a, b = b, a
    while b:
        a, b = b, _primitive(_pseudo_remainder(a, b))
    return _primitive(a)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd, without the Bezout cofactors.

    Over Q the common case of coprime inputs is settled by one gcd modulo a
    large prime that does not divide either leading coefficient; otherwise a
    primitive remainder sequence over Z runs. Other coefficient rings use the
    plain Euclidean algorithm.
    """
    if _is_rational(a) and _is_rational(b):
        if a.is_zero() or b.is_zero():
            return (b if a.is_zero() else a).monic()
        A, B = _primitive_integer(a), _primitive_integer(b)
        if A[-1] % _GCD_PRIME and B[-1] % _GCD_PRIME and _gcd_degree_mod(A, B, _GCD_PRIME) == 0:
            return UniPoly([Fraction(1)])
        G = _integer_gcd(A, B)
        return UniPoly([Fraction(x) for x in G]).monic()
    r0, r1 = a, b
    while not r1.is_zero():
        r0, r1 = r1, r0 % r1
    return r0.monic()


def is_squarefree(p: UniPoly) -> bool:
    """Squarefreeness over Q via gcd with the derivative."""
    if p.degree <= 0:
        return True
    return poly_gcd(p, p.derivative()).degree == 0


def modular_inverse(a: UniPoly, m: UniPoly) -> UniPoly:
    """Inverse of ``a`` modulo ``m``. Raises :class:`NotCoprime` if it does not exist."""
    if m.degree < 1:
        raise ValueError("modulus must have positive degree")
    g, s, _ = poly_eea_gcd(a % m, m)
    if g.degree != 0:
        raise NotCoprime(f"gcd has degree {g.degree}")
    return s % m


# --- traces, norms and characteristic polynomials in R[Y]/(m) ----------------


def power_sums_of_roots(m: UniPoly, count: int) -> List:
    """Newton power sums s_0..s_{count-1} of the roots of the monic ``m``.

    Division free, so it works for any coefficient ring.
    """
    d = m.degree
    if m.lc() != 1:
        raise ValueError("power sums need a monic polynomial")
    c = m.coeffs
    # e_i = (-1)^i c_{d-i}; p_k = sum_{i=1}^{k-1} (-1)^{i-1} e_i p_{k-i} + (-1)^{k-1} k e_k
    sums: List = [d]
    for k in range(1, count):
        acc = 0
        for i in range(1, min(k, d + 1)):
            # (-1)^{i-1} e_i = -c_{d-i}
            acc = acc - c[d - i] * sums[k - i]
        if k <= d:
            acc = acc - c[d - k] * k
        sums.append(acc)
    return sums


def trace_mod(g: UniPoly, sums: Sequence) -> object:
    """Trace of multiplication by ``g`` (already reduced) in R[Y]/(m)."""
    acc = 0
    for i, c in enumerate(g.coeffs):
        acc = acc + c * sums[i]
    return acc


def elementary_from_power_sums(p: Sequence, d: int) -> List:
    """Elementary symmetric functions e_0..e_d from power sums p_1..p_d.

    ``p[k]`` holds the k-th power sum (``p[0]`` is ignored). Only divisions by
    the integers 1..d are used, so any Q-algebra works.
    """
    e: List = [1]
    for k in range(1, d + 1):
        acc = 0
        for i in range(1, k + 1):
            term = e[k - i] * p[i]
            acc = acc + term if i % 2 == 1 else acc - term
        e.append(acc * Fraction(1, k))
    return e


def charpoly_mod(ell: UniPoly, m: UniPoly) -> UniPoly:
    """Characteristic polynomial of multiplication by ``ell`` in R[Y]/(m), m monic.

    Equals ``Res_Z(Y - ell(Z), m(Z))`` and is computed from the power sums
    Tr(ell^k), with no division other than by small integers.
    """
    d = m.degree
    sums = power_sums_of_roots(m, d)
    ell = ell % m
    p: List = [d]
    power = UniPoly([1])
    for _ in range(d):
        power = (power * ell) % m
        p.append(trace_mod(power, sums))
    e = elementary_from_power_sums(p, d)
    # chi(Y) = sum_k (-1)^k e_k Y^{d-k}
    out = [0] * (d + 1)
    for k in range(d + 1):
        out[d - k] = e[k] if k % 2 == 0 else -e[k]
    return UniPoly(out)


def norm_mod(a: UniPoly, m: UniPoly):
    """Product of ``a`` over the roots of the monic ``m``: det of multiplication by a."""
    d = m.degree
    if d == 0:
        return 1
    chi = charpoly_mod(a, m)
    c0 = chi.coeff(0)
    return c0 if d % 2 == 0 else -c0


# --- resultants -------------------------------------------------------------


def sylvester_matrix(a: UniPoly, b: UniPoly) -> List[List]:
    """Sylvester matrix with rows of ``a`` first, coefficients in descending order."""
    m, n = a.degree, b.degree
    size = m + n
    rows = []
    ad = list(reversed(a.coeffs))
    bd = list(reversed(b.coeffs))
    for i in range(n):
        rows.append([0] * i + ad + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + bd + [0] * (size - n - 1 - i))
    return rows


def determinant(matrix: Sequence[Sequence]):
    """Determinant by Gaussian elimination, pivoting on units of the coefficient ring."""
    rows = [list(r) for r in matrix]
    n = len(rows)
    det = 1
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if _is_unit(rows[r][col]):
                pivot = r
                break
        if pivot is None:
            if all(_is_zero(rows[r][col]) for r in range(col, n)):
                return 0
            _require_unit(rows[col][col])
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        pv = rows[col][col]
        det = det * pv
        inv = reciprocal(pv)
        for r in range(col + 1, n):
            f = rows[r][col]
            if _is_zero(f):
                continue
            f = f * inv
            row_c = rows[col]
            row_r = rows[r]
            for k in range(col + 1, n):
                row_r[k] = row_r[k] - f * row_c[k]
    return det


def _resultant_euclid(a: UniPoly, b: UniPoly):
    """Resultant through the Euclidean remainder sequence.

    Uses Res(a, b) = (-1)^{deg a deg b} lc(b)^{deg a - deg r} Res(b, r) with
    r = a mod b.
    """
    result = 1
    while True:
        da, db = a.degree, b.degree
        if db == 0:
            return result * b.lc() ** da
        r = a % b
        if r.is_zero():
            return 0
        if (da * db) % 2 == 1:
            result = -result
        result = result * b.lc() ** (da - r.degree)
        a, b = b, r


def resultant_univariate(a: UniPoly, b: UniPoly):
    """Resultant with the Sylvester-determinant sign convention.

    Dispatch: when either argument is monic the determinant of the
    multiplication map is computed from power sums (no divisions, so it also
    works over jets and power series); otherwise small cases use the
    Sylvester determinant and larger ones the Euclidean remainder sequence.
    """
    if a.is_zero() or b.is_zero():
        raise ValueError("resultant of a zero polynomial")
    da, db = a.degree, b.degree
    if da == 0:
        return a.lc() ** db
    if db == 0:
        return b.lc() ** da
    if b.lc() == 1:
        n = norm_mod(a, b)
        return n if (da * db) % 2 == 0 else -n
    if a.lc() == 1:
        return norm_mod(b, a)
    if max(da, db) <= 8:
        return determinant(sylvester_matrix(a, b))
    return _resultant_euclid(a, b)


def interpolate(nodes: Sequence[Fraction], values: Sequence) -> UniPoly:
    """Newton interpolation through ``(nodes[i], values[i])``.

    Nodes are distinct rationals; values may live in any Q-algebra since
    only node differences are inverted.
    """
    n = len(nodes)
    coef = list(values)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            inv = Fraction(1) / (nodes[i] - nodes[i - j])
            coef[i] = (coef[i] - coef[i - 1]) * inv
    poly = UniPoly([coef[-1]])
    for i in range(n - 2, -1, -1):
        poly = poly * UniPoly([-nodes[i], Fraction(1)]) + UniPoly([coef[i]])
    return poly


def bivariate_resultant_by_interpolation(a: Sequence[UniPoly], b: UniPoly, deg_bound: int) -> UniPoly:
    """Res_Z(a(Y, Z), b(Z)) as a polynomial in Y.

    ``a`` is given as a list of polynomials in Z: ``a[i]`` is the coefficient
    of Y^i. The resultant is evaluated at Y = 0, 1, ..., deg_bound and
    interpolated; coefficients of ``a`` and ``b`` may be jets or series.
    """
    nodes = [Fraction(k) for k in range(deg_bound + 1)]
    values = []
    for y in nodes:
        ay = UniPoly()
        power = Fraction(1)
        for coeff in a:
            ay = ay + coeff.scale(power)
            power *= y
        if ay.is_zero():
            values.append(0)
        else:
            values.append(resultant_univariate(ay, b))
    return interpolate(nodes, values)
