"""From per-cell series solutions to a geometric solution of the curve.

Each cell gamma contributes the factor

    m_gamma(T, Y) = prod over its branches of (Y - sum_i u_i T^gamma_i X_i(T))

in the variable T_gamma = t^(1/gamma_(n+1)) of the curve parameter t. With
mu = min(0, gamma_1, ..., gamma_n) the factor is T^(mu d) P_gamma(T, Y) where
P_gamma has coefficient T^(-mu j) mt_j on Y^j and mt is the characteristic
polynomial of the shifted form sum_i u_i T^(gamma_i - mu) w_i (a regular
series). All factors are merged in Q[[R]] with R = t^(1/lambda),
lambda = lcm of the gamma_(n+1); the total shift T^nu is applied at the end,
where every surviving exponent must be integral. The derivatives with respect
to the linear form are carried along as jets, which yields the
parametrizations v_k = -dm/dLambda_k of the curve.
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..arith import UniPoly, is_squarefree, modular_inverse
from ..arith.jet import Jet
from ..arith.pade import RationalFunction, integer_denominator, pade_approximant
from ..arith.poly import elementary_from_power_sums
from ..arith.series import MonicModulus, SeriesPoly, TruncatedSeries, kronecker_mul
from ..errors import ConsistencyError, FractionalResidue, NotSeparating, PadeDegenerate, PoleAtOne
from ..system import GeometricSolution0D
from .newton import SeriesGeometricSolution


@dataclass(frozen=True)
class CellFactor:
    """P_gamma and its linear-form gradient, in the cell's own variable T_gamma."""

    gamma: Tuple[int, ...]
    d_gamma: int
    mu: int
    value: SeriesPoly
    grads: Tuple[SeriesPoly, ...]

    @property
    def precision(self) -> int:
        return self.value.prec


@dataclass(frozen=True)
class CurveSolution:
    """u, the monic m^(T, Y) and the numerators v_k with dm^/dY X_k = v_k.

    Coefficients are :class:`RationalFunction` values in T.
    """

    u: Tuple[Fraction, ...]
    m_hat: Tuple[RationalFunction, ...]
    v: Tuple[Tuple[RationalFunction, ...], ...]
    bound: int

    @property
    def degree(self) -> int:
        return len(self.m_hat) - 1

    def height(self) -> int:
        """Largest numerator or denominator degree over all coefficients."""
        out = 0
        for c in list(self.m_hat) + [c for vk in self.v for c in vk]:
            if not c.is_zero():
                out = max(out, c.max_degree())
        return out


def shifted_exponents(gamma: Sequence[int]) -> Tuple[int, List[int]]:
    n = len(gamma) - 1
    mu = min(0, min(gamma[:n]))
    return mu, [g - mu for g in gamma[:n]]


def change_linear_form(sol: SeriesGeometricSolution, gamma: Sequence[int], with_jets: bool = True,
                       u: Optional[Sequence[Fraction]] = None) -> CellFactor:
    """Characteristic polynomial of sum_i Lambda_i T^(gamma_i - mu) w_i modulo m.

    ``u`` defaults to the form ``sol`` is expressed in; any other form gives
    the same result as lifting with it would, since the characteristic
    polynomial only depends on the branches. Power sums p_k = Tr(l^k) give the polynomial through Newton's identities;
    their derivatives dp_k/dLambda_j = k Tr(l^(k-1) T^(gamma_j - mu) w_j)
    give its gradient at Lambda = u. Returns the factor P_gamma described in
    the module docstring.
    """
    n = len(sol.w)
    d = sol.degree
    prec = sol.precision
    mu, shifts = shifted_exponents(gamma)
    mod = MonicModulus(sol.m)
    gs = [w.shift_t(s) for w, s in zip(sol.w, shifts)]
    ell = SeriesPoly.zero(prec)
    for c, g in zip(sol.u if u is None else u, gs):
        ell = ell + g.scale(c)
    sums = mod.power_sums()
    one = mod.reduce(SeriesPoly([[1]], 1, prec))
    powers = [one]
    for _ in range(d):
        powers.append(mod.mul(powers[-1], ell))
    p: List = [d]
    for k in range(1, d + 1):
        value = mod.trace(powers[k], sums)
        grad = [mod.trace(mod.mul(powers[k - 1], g), sums) * k for g in gs] if with_jets else []
        p.append(Jet(value, grad))
    e = elementary_from_power_sums(p, d)
    nj = n if with_jets else 0
    val_rows: List[TruncatedSeries] = []
    grad_rows: List[List[TruncatedSeries]] = [[] for _ in range(nj)]
    zero = TruncatedSeries([], 1, prec)
    for j in range(d):
        ej = e[d - j]
        sign = -1 if (d - j) % 2 else 1
        val_rows.append((ej.value * sign).shift(-mu * j))
        for k in range(nj):
            grad_rows[k].append((ej.grad[k] * sign).shift(-mu * j))
    val_rows.append(TruncatedSeries([1], 1, prec).shift(-mu * d))
    for k in range(nj):
        grad_rows[k].append(zero)
    value = SeriesPoly.from_series(val_rows, prec)
    grads = tuple(SeriesPoly.from_series(rows, prec) for rows in grad_rows)
    return CellFactor(gamma=tuple(gamma), d_gamma=d, mu=mu, value=value, grads=grads)


def check_separation(factor: CellFactor, rng: random.Random) -> None:
    """The shifted form must separate the branches: m~ squarefree at a random T."""
    t = Fraction(rng.randint(1, 10 ** 6), rng.randint(1, 10 ** 6))
    if not is_squarefree(factor.value.evaluate_t(t)):
        raise NotSeparating(f"linear form does not separate the branches of cell {factor.gamma}")


def total_shift(cells: Sequence[Tuple[Tuple[int, ...], int]]) -> Fraction:
    """nu = sum over cells of mu_gamma D_gamma / gamma_(n+1)."""
    nu = Fraction(0)
    for gamma, d in cells:
        mu, _ = shifted_exponents(gamma)
        nu += Fraction(mu * d, gamma[-1])
    return nu


def required_precision(gamma: Sequence[int], bound: int, nu: Fraction) -> int:
    """T_gamma-precision for the product to be known to absolute order 2 * bound."""
    return math.ceil(gamma[-1] * (2 * bound - nu))


# --- Laurent series and rational recovery -------------------------------------


@dataclass(frozen=True)
class Laurent:
    """sum_k nums[k] / den * T^(start + k), known through T^(start + len - 1)."""

    start: int
    nums: Tuple[int, ...]
    den: int = 1

    @classmethod
    def from_fractions(cls, start: int, coeffs: Sequence) -> "Laurent":
        s = TruncatedSeries.from_coefficients(list(coeffs) or [0], max(len(coeffs) - 1, 0))
        return cls(start, tuple(s.nums[: len(coeffs)]), s.den)

    @property
    def top(self) -> int:
        return self.start + len(self.nums) - 1

    def __getitem__(self, k: int) -> Fraction:
        i = k - self.start
        if i < 0:
            return Fraction(0)
        if i >= len(self.nums):
            raise IndexError(f"T^{k} beyond the known order {self.top}")
        return Fraction(self.nums[i], self.den)

    def valuation(self) -> Optional[int]:
        for i, c in enumerate(self.nums):
            if c != 0:
                return self.start + i
        return None

    def window(self, lo: int, length: int) -> List[int]:
        """Numerators of T^lo .. T^(lo + length - 1); zero below ``start``."""
        out = []
        for k in range(lo, lo + length):
            i = k - self.start
            if i >= len(self.nums):
                raise IndexError(f"T^{k} beyond the known order {self.top}")
            out.append(self.nums[i] if i >= 0 else 0)
        return out


def _series_from(a: Laurent, lo: int, length: int) -> TruncatedSeries:
    return TruncatedSeries(a.window(lo, length), a.den, length - 1)


def pade_laurent(a: Laurent, bound: int) -> RationalFunction:
    """Rational function of numerator and denominator degree <= bound matching ``a``
    through T^(2 bound), allowing a pole at T = 0."""
    v = a.valuation()
    if v is None or v > 2 * bound:
        return RationalFunction(UniPoly())
    if v >= 0:
        if v > bound:
            raise PadeDegenerate(f"valuation {v} exceeds the degree bound {bound}")
        b = _series_from(a, v, 2 * bound - v + 1)
        r = pade_approximant(b, bound - v, bound)
        return RationalFunction(r.num.shift(v), r.den)
    if bound + v < 0:
        raise PadeDegenerate(f"pole of order {-v} exceeds the degree bound {bound}")
    b = _series_from(a, v, 2 * bound + v + 1)
    r = pade_approximant(b, bound, bound + v)
    return RationalFunction(r.num, r.den.shift(-v))


def _try_denominator(a: Laurent, L: UniPoly, bound: int) -> Optional[RationalFunction]:
    """P / L when L a = P mod T^(2 bound + 1) with deg P <= bound and no pole."""
    if L.degree > bound:
        return None
    lo = min(a.start, 0)
    Li, c = integer_denominator(L)
    window = a.window(lo, 2 * bound + 1 - lo)
    prod = kronecker_mul(Li, window)[: len(window)]
    num = [Fraction(0)] * (bound + 1)
    for idx, x in enumerate(prod):
        if x:
            k = lo + idx
            if k < 0 or k > bound:
                return None
            num[k] = Fraction(x, a.den * c)
    return RationalFunction(UniPoly(num), L)


def recover_rational(series: Sequence[Laurent], bound: int) -> List[RationalFunction]:
    """Pade recovery of several coefficients that tend to share a denominator.

    A running lcm L of the denominators found so far is tried first; only
    when L a is not a polynomial of degree <= bound does a full Pade
    approximation run.
    """
    L = UniPoly([Fraction(1)])
    out = []
    for a in series:
        r = _try_denominator(a, L, bound)
        if r is None:
            r = pade_laurent(a, bound)
            g = _poly_gcd(L, r.den)
            L = (L * r.den).exact_div(g).monic()
        out.append(r)
    return out


def _poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    from ..arith import poly_gcd
    return poly_gcd(a, b)


# --- assembly -----------------------------------------------------------------


def _spread(sp: SeriesPoly, step: int, prec: int) -> SeriesPoly:
    """Substitute T -> R^step."""
    rows = []
    for r in sp.rows:
        out = [0] * (prec + 1)
        for k, x in enumerate(r):
            if x and k * step <= prec:
                out[k * step] = x
        rows.append(out)
    return SeriesPoly(rows, sp.den, prec)


def _to_laurent(row: Sequence[int], den: int, lam: int, shift: int, top: int) -> Laurent:
    """R-series row times R^shift, read as a series in T = R^lam."""
    start = -((-shift) // lam)  # ceil(shift / lam)
    for e, x in enumerate(row):
        if x and (e + shift) % lam:
            raise FractionalResidue(f"nonzero coefficient at T^({e + shift}/{lam})")
    nums = []
    for t in range(start, top + 1):
        e = t * lam - shift
        nums.append(row[e] if 0 <= e < len(row) else 0)
    return Laurent(start, tuple(nums), den)


def assemble_and_pade(factors: Sequence[CellFactor], bound: int, u: Sequence[Fraction]) -> CurveSolution:
    """Multiply the cell factors, restore integral exponents and recover Q(T) coefficients."""
    n = len(u)
    lam = 1
    for f in factors:
        lam = lam * f.gamma[-1] // math.gcd(lam, f.gamma[-1])
    nu = total_shift([(f.gamma, f.d_gamma) for f in factors])
    shift = nu * lam
    if shift.denominator != 1:
        raise ConsistencyError("total shift is not a multiple of 1/lambda")
    shift = int(shift)
    prec_r = min((lam // f.gamma[-1]) * (f.precision + 1) - 1 for f in factors)
    top = (prec_r + shift) // lam
    if top < 2 * bound:
        raise ConsistencyError(f"product known to T^{top}, T^{2 * bound} needed")
    prod: Optional[Jet] = None
    for f in factors:
        step = lam // f.gamma[-1]
        jet = Jet(_spread(f.value, step, prec_r), [_spread(g, step, prec_r) for g in f.grads])
        prod = jet if prod is None else prod * jet
    D = prod.value.degree
    # only orders up to 2 * bound are needed for the recovery
    m_series = [_to_laurent(prod.value.rows[j], prod.value.den, lam, shift, 2 * bound) for j in range(D + 1)]
    v_series = []
    for k in range(n):
        g = prod.grad[k]
        rows = [g.rows[j] if j < len(g.rows) else [0] for j in range(D)]
        v_series.append([_to_laurent([-x for x in r], g.den, lam, shift, 2 * bound) for r in rows])
    flat = recover_rational(m_series + [s for vs in v_series for s in vs], bound)
    m_hat = tuple(flat[: D + 1])
    if m_hat[-1] != 1:
        raise ConsistencyError("assembled minimal polynomial is not monic")
    vs = []
    for k in range(n):
        vs.append(tuple(flat[D + 1 + k * D: D + 1 + (k + 1) * D]))
    return CurveSolution(u=tuple(u), m_hat=m_hat, v=tuple(vs), bound=bound)


# --- specialization -----------------------------------------------------------


def _at(r: RationalFunction, t) -> Fraction:
    try:
        return r(t)
    except ZeroDivisionError:
        raise PoleAtOne(f"coefficient {r!r} has a pole at T = {t}") from None


def specialize_T1(curve: CurveSolution) -> GeometricSolution0D:
    """Fiber at T = 1, converted to the direct form X_k = w_k(Y)."""
    m = UniPoly([_at(c, 1) for c in curve.m_hat])
    if m.degree != curve.degree:
        raise ConsistencyError("leading coefficient changed under specialization")
    if not is_squarefree(m):
        raise NotSeparating("minimal polynomial at T = 1 is not squarefree")
    dinv = modular_inverse(m.derivative(), m)
    ws = []
    for vk in curve.v:
        v1 = UniPoly([_at(c, 1) for c in vk])
        ws.append((v1 * dinv) % m)
    return GeometricSolution0D(tuple(curve.u), m, tuple(ws))
