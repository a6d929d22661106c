"""Global Newton lifting of a geometric solution along T.

A solution at precision s consists of a monic m(T, Y) of degree d and
w_1..w_n of degree < d in Y, all known modulo T^(s+1), such that every
branch of the curve through the T = 0 fiber satisfies X_i = w_i(T, u.X).
One step doubles the number of correct T-coefficients:

    w~ = w - J(w)^(-1) F(w)           mod m
    D  = u.w~ - Y                     mod m
    m  <- m - (D * dm/dY mod m)
    w  <- w~ - (D * dw~/dY mod m)

The linear form u is constant: the T = 0 fiber is a set of simple points
separated by u, so the quotient ring stays reduced and every inverse exists.
Since F(w) and D vanish to order a = s + 1, the correction terms are computed
after dividing out T^a, at precision a - 1 instead of 2a - 1.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import List, Optional, Sequence, Tuple

from ..arith import modular_inverse
from ..arith.series import MonicModulus, SeriesPoly
from ..errors import ConsistencyError, NotCoprime, PrecisionStall, SingularJacobian
from ..system import GeometricSolution0D
from .deformation import TPoly

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeriesGeometricSolution:
    """Geometric solution over Q[[T]] known modulo T^(precision+1)."""

    u: Tuple[Fraction, ...]
    m: SeriesPoly
    w: Tuple[SeriesPoly, ...]
    precision: int

    @classmethod
    def from_fiber(cls, sol: GeometricSolution0D) -> "SeriesGeometricSolution":
        m = SeriesPoly.from_unipoly(sol.m, 0)
        w = tuple(SeriesPoly.from_unipoly(wk, 0) for wk in sol.w)
        return cls(tuple(sol.u), m, w, 0)

    @property
    def degree(self) -> int:
        return self.m.degree

    def truncate(self, prec: int) -> "SeriesGeometricSolution":
        return SeriesGeometricSolution(self.u, self.m.truncate(prec), tuple(w.truncate(prec) for w in self.w), prec)

    def at_zero(self) -> GeometricSolution0D:
        return GeometricSolution0D(self.u, self.m.at_zero(), tuple(w.at_zero() for w in self.w))


# --- evaluation in Q[[T]][Y]/(m) ---------------------------------------------


def _one(prec: int) -> SeriesPoly:
    return SeriesPoly([[1]], 1, prec)


def _power_tables(ws: Sequence[SeriesPoly], mod: MonicModulus, degs: Sequence[int], prec: int):
    tables = []
    for w, top in zip(ws, degs):
        row = [mod.reduce(_one(prec))]
        for _ in range(top):
            row.append(mod.mul(row[-1], w))
        tables.append(row)
    return tables


def _monomial(tables, q: Sequence[int], mod: MonicModulus, prec: int) -> SeriesPoly:
    acc: Optional[SeriesPoly] = None
    for i, e in enumerate(q):
        if e:
            acc = tables[i][e] if acc is None else mod.mul(acc, tables[i][e])
    return mod.reduce(_one(prec)) if acc is None else acc


def evaluate_mod(polys: Sequence[TPoly], tables, mod: MonicModulus, prec: int) -> List[SeriesPoly]:
    """p(w(Y), T) mod (m, T^(prec+1)) for each p."""
    out = []
    for p in polys:
        acc = SeriesPoly.zero(prec)
        for q, c, e in p.terms:
            if e > prec or c == 0:
                continue
            acc = acc + _monomial(tables, q, mod, prec).scale(c).shift_t(e)
        out.append(acc)
    return out


def jacobian_mod(polys: Sequence[TPoly], tables, mod: MonicModulus, prec: int) -> List[List[SeriesPoly]]:
    n = len(tables)
    jac = []
    for p in polys:
        row = []
        for k in range(n):
            acc = SeriesPoly.zero(prec)
            for q, c, e in p.terms:
                if e > prec or c == 0 or q[k] == 0:
                    continue
                qk = list(q)
                qk[k] -= 1
                acc = acc + _monomial(tables, qk, mod, prec).scale(c * q[k]).shift_t(e)
            row.append(acc)
        jac.append(row)
    return jac


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def det_mod(matrix: Sequence[Sequence[SeriesPoly]], mod: MonicModulus, prec: int) -> SeriesPoly:
    """Leibniz expansion; n is small."""
    n = len(matrix)
    if n == 0:
        return mod.reduce(_one(prec))
    total = SeriesPoly.zero(prec)
    for perm in permutations(range(n)):
        term = matrix[0][perm[0]]
        for i in range(1, n):
            term = mod.mul(term, matrix[i][perm[i]])
        total = total + term if _perm_sign(perm) > 0 else total - term
    return total


def adjugate_mod(matrix: Sequence[Sequence[SeriesPoly]], mod: MonicModulus, prec: int) -> List[List[SeriesPoly]]:
    n = len(matrix)
    if n == 1:
        return [[mod.reduce(_one(prec))]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[matrix[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = det_mod(minor, mod, prec)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


def _div_t(a: SeriesPoly, k: int, prec: int) -> SeriesPoly:
    """a / T^k, checking that the low part vanishes; result at precision ``prec``."""
    for r in a.rows:
        if any(r[:k]):
            raise PrecisionStall(f"residual does not vanish to order {k}")
    return SeriesPoly([r[k:k + prec + 1] for r in a.rows], a.den, prec)


# --- one Newton step ----------------------------------------------------------


class _InverseState:
    """Inverse of det J modulo (m, T^(prec+1)), refined from step to step."""

    def __init__(self):
        self.b: Optional[SeriesPoly] = None
        self.prec = -1

    def lift(self, det: SeriesPoly, m: SeriesPoly, prec: int) -> SeriesPoly:
        if self.b is None:
            try:
                inv0 = modular_inverse(det.at_zero(), m.at_zero())
            except NotCoprime:
                raise SingularJacobian("Jacobian determinant vanishes at a start point") from None
            self.b, self.prec = SeriesPoly.from_unipoly(inv0, 0), 0
        b, bp = self.b, self.prec
        two = SeriesPoly([[2]], 1, prec)
        while bp < prec:
            bp = min(2 * bp + 1, prec)
            mod = MonicModulus(m.truncate(bp))
            b = b.extend(bp)
            db = mod.mul(det.truncate(bp), b)
            b = mod.mul(b, two.truncate(bp) - db)
        self.b, self.prec = b, bp
        return b.truncate(prec) if bp > prec else b


def newton_step(polys: Sequence[TPoly], sol: SeriesGeometricSolution, new_prec: int,
                state: Optional[_InverseState] = None) -> SeriesGeometricSolution:
    """Raise the precision of ``sol`` to ``new_prec`` (at most 2 * precision + 1)."""
    a = sol.precision + 1
    P = new_prec
    if P < a or P > 2 * a - 1:
        raise ValueError(f"cannot step from precision {sol.precision} to {new_prec}")
    low = P - a
    state = state or _InverseState()
    n = len(sol.w)
    u = sol.u
    m = sol.m.extend(P)
    ws = [w.extend(P) for w in sol.w]
    mod = MonicModulus(m)
    degs = [max(p.degrees()[i] for p in polys) for i in range(n)]
    tables = _power_tables(ws, mod, degs, P)
    residual = evaluate_mod(polys, tables, mod, P)
    Fh = [_div_t(r, a, low) for r in residual]

    mod_low = MonicModulus(m.truncate(low))
    tables_low = [[t.truncate(low) for t in row] for row in tables]
    jac = jacobian_mod(polys, tables_low, mod_low, low)
    det = det_mod(jac, mod_low, low)
    adj = adjugate_mod(jac, mod_low, low)
    dinv = state.lift(det, m.truncate(low), low)
    deltas = []
    for i in range(n):
        acc = SeriesPoly.zero(low)
        for k in range(n):
            acc = acc + mod_low.mul(adj[i][k], Fh[k])
        deltas.append(mod_low.mul(acc, dinv))

    wt = [w - d.extend(P).shift_t(a) for w, d in zip(ws, deltas)]
    # D = (u.w - Y) mod m - T^a u.delta
    form = SeriesPoly([[0], [1]], 1, P).scale(-1)
    for c, w in zip(u, ws):
        form = form + w.scale(c)
    Dh = _div_t(mod.reduce(form), a, low)
    for c, d in zip(u, deltas):
        Dh = Dh - d.scale(c)
    dm = mod_low.mul(Dh, m.truncate(low).derivative_y())
    m_new = m - dm.extend(P).shift_t(a)
    w_new = []
    for w in wt:
        corr = mod_low.mul(Dh, w.truncate(low).derivative_y())
        w_new.append(w - corr.extend(P).shift_t(a))
    if not m_new.is_monic() or m_new.degree != sol.m.degree:
        raise ConsistencyError("minimal polynomial lost monicity during lifting")
    return SeriesGeometricSolution(u, m_new, tuple(w_new), P)


def lift_to(polys: Sequence[TPoly], sol: SeriesGeometricSolution, target: int) -> SeriesGeometricSolution:
    """Newton steps until the precision reaches ``target``."""
    if sol.precision >= target:
        return sol.truncate(target)
    state = _InverseState()
    while sol.precision < target:
        new_prec = min(2 * sol.precision + 1, target)
        sol = newton_step(polys, sol, new_prec, state)
        log.debug("lifted to precision %d (degree %d)", sol.precision, sol.degree)
    return sol


def check_substitution(polys: Sequence[TPoly], sol: SeriesGeometricSolution) -> bool:
    """p(w, T) = 0 mod (m, T^(precision+1)) for every p."""
    P = sol.precision
    mod = MonicModulus(sol.m)
    n = len(sol.w)
    degs = [max(p.degrees()[i] for p in polys) for i in range(n)]
    tables = _power_tables(list(sol.w), mod, degs, P)
    return all(r.is_zero() for r in evaluate_mod(polys, tables, mod, P))


def newton_lift_stage1(sol0: GeometricSolution0D, hgamma: Sequence[TPoly], target: int) -> SeriesGeometricSolution:
    """Lift a start solution to precision ``target`` (at least 1)."""
    sol = SeriesGeometricSolution.from_fiber(sol0)
    if not check_substitution(hgamma, sol):
        raise ConsistencyError("start solution does not lie on the T = 0 fiber")
    return lift_to(hgamma, sol, max(target, 1))


def newton_lift_stage2(sol: SeriesGeometricSolution, hgamma: Sequence[TPoly], target: int) -> SeriesGeometricSolution:
    """Continue lifting to precision ``target``."""
    return lift_to(hgamma, sol, target)
