"""Rational functions in T and Pade recovery from truncated series."""

from fractions import Fraction
import math
from typing import List, Optional, Sequence, Tuple

from ..errors import PadeDegenerate
from .poly import UniPoly, poly_gcd
from .series import TruncatedSeries, kronecker_mul


class RationalFunction:
    """Reduced quotient ``num/den`` of polynomials in T with monic ``den``."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: Optional[UniPoly] = None):
        if den is None:
            den = UniPoly([Fraction(1)])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = UniPoly(), UniPoly([Fraction(1)])
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        lc = den.lc()
        self.num = num.scale(1 / Fraction(lc))
        self.den = den.monic()

    @classmethod
    def coprime(cls, num: UniPoly, den: UniPoly) -> "RationalFunction":
        """Build from ``num`` and ``den`` known to be coprime, skipping the gcd."""
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        out = cls.__new__(cls)
        if num.is_zero():
            out.num, out.den = UniPoly(), UniPoly([Fraction(1)])
            return out
        lc = Fraction(den.lc())
        out.num = num.scale(1 / lc)
        out.den = den.monic()
        return out

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(UniPoly([Fraction(c)]))

    def __call__(self, t):
        d = self.den(Fraction(t))
        if d == 0:
            raise ZeroDivisionError("pole")
        return Fraction(self.num(Fraction(t))) / d

    def degrees(self) -> Tuple[int, int]:
        """(deg num, deg den), with deg 0 = -1 for the zero numerator."""
        return self.num.degree, self.den.degree

    def max_degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(other)
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r} / {self.den!r})"

    def series(self, prec: int) -> TruncatedSeries:
        """Taylor expansion at T = 0; requires den(0) != 0."""
        n = TruncatedSeries.from_coefficients(list(self.num.coeffs) or [0], prec)
        d = TruncatedSeries.from_coefficients(list(self.den.coeffs), prec)
        return n / d


try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - Fraction is the slower fallback
    _Q = Fraction


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _sub_mul(a: list, q: list, b: list) -> list:
    """a - q * b on coefficient lists."""
    out = list(a) + [0] * max(0, len(q) + len(b) - 1 - len(a))
    for i, x in enumerate(q):
        if x:
            for j, y in enumerate(b):
                out[i + j] -= x * y
    return _trim(out)


def _divmod(a: list, b: list):
    rem = list(a)
    db = len(b) - 1
    inv = 1 / b[-1]
    quot = [0] * max(0, len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if c:
            qk = c * inv
            quot[k - db] = qk
            for j in range(db + 1):
                rem[k - db + j] -= qk * b[j]
    return _trim(quot), _trim(rem[:db])


def integer_denominator(q: UniPoly) -> Tuple[List[int], int]:
    """(ints, c) with q = ints / c and ints integral."""
    c = 1
    for x in q.coeffs:
        d = Fraction(x).denominator
        c = c * d // math.gcd(c, d)
    return [int(Fraction(x) * c) for x in q.coeffs], c


def congruence_holds(p: UniPoly, q: UniPoly, nums: Sequence[int], den: int, k: int) -> bool:
    """p = q * (nums / den) mod T^k, checked with one integer product."""
    qi, c = integer_denominator(q)
    prod = kronecker_mul(qi, list(nums[:k]))[:k]
    prod += [0] * (k - len(prod))
    pc = list(p.coeffs) + [0] * max(0, k - len(p.coeffs))
    if len(pc) > k:
        return False
    # p * c * den == prod
    return all(Fraction(x) * c * den == y for x, y in zip(pc, prod))


# 62-bit primes below 2^62, found by searching downward; the list is extended
# on demand.
_PRIMES: List[int] = []
_MAX_PRIMES = 4096


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    # deterministic for n < 3.3e24 with these bases
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime(i: int) -> int:
    while len(_PRIMES) <= i:
        c = (_PRIMES[-1] if _PRIMES else (1 << 62)) - 1
        while not _is_probable_prime(c):
            c -= 1
        _PRIMES.append(c)
    return _PRIMES[i]


def rational_reconstruction(a: int, m: int) -> Optional[Fraction]:
    """The fraction r/s with |r|, s <= sqrt(m/2) and r = a s mod m, if any."""
    a %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _pade_mod(nums: Sequence[int], den: int, num_deg: int, p: int):
    """Pade images (r, t) modulo ``p``, normalized so t(0) = 1, or None."""
    dinv = pow(den % p, -1, p)
    k = len(nums)
    r0 = [0] * k + [1]
    r1 = _trim([x * dinv % p for x in nums])
    t0: List[int] = []
    t1 = [1]
    while len(r1) - 1 > num_deg:
        # r0 = q r1 + r, t_new = t0 - q t1, all mod p
        rem = list(r0)
        db = len(r1) - 1
        inv = pow(r1[-1], -1, p)
        quot = [0] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i] % p
            if c:
                qi = c * inv % p
                quot[i - db] = qi
                base = i - db
                for j in range(db + 1):
                    rem[base + j] -= qi * r1[j]
        rem = _trim([x % p for x in rem[:db]])
        tn = list(t0) + [0] * max(0, len(quot) + len(t1) - 1 - len(t0))
        for i, x in enumerate(quot):
            if x:
                for j, y in enumerate(t1):
                    tn[i + j] -= x * y
        r0, r1 = r1, rem
        t0, t1 = t1, _trim([x % p for x in tn])
    if not t1 or t1[0] == 0:
        return None
    c = pow(t1[0], -1, p)
    return [x * c % p for x in r1], [x * c % p for x in t1]


def _pade_multimodular(nums: Sequence[int], den: int, num_deg: int, den_deg: int,
                       k: int) -> Optional[RationalFunction]:
    """Modular images, CRT and rational reconstruction, certified exactly.

    Images whose degree pattern differs from the most frequent one come from
    unlucky primes and are dropped. Returns None when no certified answer is
    found, so the caller can fall back to exact arithmetic.
    """
    groups = {}
    misses = 0
    i = 0
    last = None
    while i < _MAX_PRIMES:
        p = _prime(i)
        i += 1
        if den % p == 0:
            continue
        img = _pade_mod(nums, den, num_deg, p)
        if img is None:
            misses += 1
            if misses > 3 and not groups:
                return None
            continue
        key = (len(img[0]), len(img[1]))
        g = groups.setdefault(key, [[0] * key[0], [0] * key[1], 1])
        a_r, a_t, mod = g
        # CRT update of each coefficient
        minv = pow(mod % p, -1, p)
        g[0] = [x + mod * ((y - x) * minv % p) for x, y in zip(a_r, img[0])]
        g[1] = [x + mod * ((y - x) * minv % p) for x, y in zip(a_t, img[1])]
        g[2] = mod * p
        best = max(groups, key=lambda kk: groups[kk][2])
        if best != key:
            continue
        coeffs = []
        for x in g[0] + g[1]:
            f = rational_reconstruction(x, g[2])
            if f is None:
                break
            coeffs.append(f)
        else:
            cand = (tuple(coeffs[: key[0]]), tuple(coeffs[key[0]:]))
            if cand == last:
                num = UniPoly(list(cand[0]))
                dd = UniPoly(list(cand[1]))
                if num.degree <= num_deg and dd.degree <= den_deg and congruence_holds(num, dd, nums, den, k):
                    return RationalFunction.coprime(num, dd)
            last = cand
    return None


def _pade_exact(nums: Sequence[int], den: int, num_deg: int, den_deg: int, k: int) -> RationalFunction:
    r0 = [_Q(0)] * k + [_Q(1)]
    r1 = _trim([_Q(x, den) for x in nums])
    t0, t1 = [], [_Q(1)]
    while len(r1) - 1 > num_deg:
        q, r = _divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, _sub_mul(t0, q, t1)
    if not t1 or t1[0] == 0 or len(t1) - 1 > den_deg:
        raise PadeDegenerate(f"no approximant of degrees ({num_deg}, {den_deg}) with q(0) != 0")
    # with t(0) != 0 the pair is coprime: gcd(r_i, t_i) always divides a power of T
    result = RationalFunction.coprime(UniPoly([_to_fraction(x) for x in r1]),
                                      UniPoly([_to_fraction(x) for x in t1]))
    if not congruence_holds(result.num, result.den, nums, den, k):
        raise PadeDegenerate("approximant does not match the series")
    return result


def pade_approximant(s: TruncatedSeries, num_deg: int, den_deg: int) -> RationalFunction:
    """Rational function p/q with deg p <= num_deg, deg q <= den_deg, q(0) != 0,
    and p - q s = 0 mod T^(num_deg + den_deg + 1).

    Such p/q is unique when it exists. It is computed by the extended
    Euclidean algorithm on ``(T^K, s mod T^K)`` with K = num_deg + den_deg + 1,
    stopped at the first remainder of degree <= num_deg: first modulo
    several primes with rational reconstruction, and if that does not
    certify, over the rationals. Raises :class:`PadeDegenerate` when no
    solution with q(0) != 0 exists.
    """
    if num_deg < 0 or den_deg < 0:
        raise PadeDegenerate(f"negative degree bound ({num_deg}, {den_deg})")
    k = num_deg + den_deg + 1
    if s.prec + 1 < k:
        raise ValueError(f"series known to {s.prec + 1} terms, {k} needed")
    nums = list(s.nums[:k])
    if not any(nums):
        return RationalFunction(UniPoly())
    r = _pade_multimodular(nums, s.den, num_deg, den_deg, k)
    if r is not None:
        return r
    return _pade_exact(nums, s.den, num_deg, den_deg, k)
