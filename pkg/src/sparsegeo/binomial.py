"""Start systems of the polyhedral deformation.

For a mixed cell the restriction of the perturbed system to the cell's points
is, after Gaussian elimination inside each support class, a binomial system
X^alpha_j = p_j. A Smith normal form K E L = diag(r) of the exponent matrix
turns it into the diagonal system Z_j^r_j = q_j, whose geometric solution is
built from iterated resultants. The solution is finally moved back to the X
coordinates through X_i = prod_j Z_j^K[j][i].
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .arith import UniPoly, is_squarefree, modular_inverse
from .arith.jet import Jet, jet_value_poly, parametrizations_from_jet, seed_jets
from .arith.poly import bivariate_resultant_by_interpolation, charpoly_mod
from .errors import ConsistencyError, H2Violated, NotCoprime, NotSeparating, SingularMatrix
from .geometry import MixedCell, SupportFamily, int_det
from .geometry.intmat import inverse as rational_inverse
from .system import GeometricSolution0D, SparsePoly, substitute_mod

Matrix = List[List[int]]


@dataclass(frozen=True)
class BinomialSystem:
    """X^alpha_j = p_j for j = 1..n; ``exponents[i][j]`` is entry i of alpha_j."""

    exponents: Tuple[Tuple[int, ...], ...]
    rhs: Tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.rhs)

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.exponents)


@dataclass(frozen=True)
class SmithDecomposition:
    """K E L = diag(r) with K, L unimodular and r_1 | r_2 | ... | r_n, r_i > 0."""

    K: Tuple[Tuple[int, ...], ...]
    L: Tuple[Tuple[int, ...], ...]
    r: Tuple[int, ...]


def _base_point(points: Sequence[Tuple[int, ...]]) -> Tuple[int, ...]:
    origin = tuple([0] * len(points[0]))
    return origin if origin in points else min(points)


def cell_to_binomial(cell: MixedCell, family: SupportFamily, coeffs: Sequence[Dict]) -> BinomialSystem:
    """Binomial system equivalent (in the torus) to the cell-restricted start system.

    ``coeffs[i]`` maps support points of equation i to their coefficients.
    Within a class the base point (the origin when the cell contains it,
    otherwise the lexicographically smallest point) is divided out, and the
    k x (k+1) coefficient matrix [M | B] is solved as y = -M^(-1) B, giving
    X^(q - base) = y_q.
    """
    n = family.n
    columns: List[Tuple[int, ...]] = []
    rhs: List[Fraction] = []
    for ell, pts in enumerate(cell.points):
        base = _base_point(pts)
        others = sorted(q for q in pts if q != base)
        eqs = family.equations_of(ell)
        M = [[Fraction(coeffs[i].get(q, 0)) for q in others] for i in eqs]
        B = [Fraction(coeffs[i].get(base, 0)) for i in eqs]
        try:
            Minv = rational_inverse(M)
        except ZeroDivisionError:
            raise H2Violated("singular", f"cell matrix of class {ell} is singular") from None
        for row in Minv:
            y = -sum((a * b for a, b in zip(row, B)), Fraction(0))
            if y == 0:
                raise H2Violated("zero_rhs", f"cell of class {ell} has a zero binomial right-hand side")
            rhs.append(y)
        for q in others:
            columns.append(tuple(a - b for a, b in zip(q, base)))
    exps = tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))
    return BinomialSystem(exponents=exps, rhs=tuple(rhs))


# --- Smith normal form -------------------------------------------------------


def _identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def max_norm(a: Sequence[Sequence[int]]) -> int:
    return max(abs(x) for row in a for x in row)


def smith_bound_holds(K: Sequence[Sequence[int]], E: Sequence[Sequence[int]]) -> bool:
    """log ||K|| <= (4n+5)(log n + log ||E||) with the max-entry norm."""
    n = len(E)
    lhs = math.log2(max_norm(K))
    rhs = (4 * n + 5) * (math.log2(n) + math.log2(max_norm(E)))
    return lhs <= rhs + 1e-9


def smith_normal_form(E: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Classical Smith normal form by row and column reduction.

    The pivot is the smallest nonzero entry in absolute value of the remaining
    block; divisibility is enforced by adding an offending row to the pivot
    row. Signs of r are fixed by negating columns of L. All invariants,
    including the norm bound on K, are checked before returning.
    """
    n = len(E)
    A = [list(map(int, row)) for row in E]
    if int_det(A) == 0:
        raise SingularMatrix("exponent matrix is singular")
    K = _identity(n)
    L = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        K[i], K[j] = K[j], K[i]

    def swap_cols(i, j):
        for M in (A, L):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        for M in (A, K):
            M[dst] = [x + f * y for x, y in zip(M[dst], M[src])]

    def add_col(dst, src, f):
        for M in (A, L):
            for row in M:
                row[dst] += f * row[src]

    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, n):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, n) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
    for j in range(n):
        if A[j][j] < 0:
            for row in A:
                row[j] = -row[j]
            for row in L:
                row[j] = -row[j]
    r = tuple(A[i][i] for i in range(n))
    _check_smith(E, K, L, r)
    return SmithDecomposition(K=tuple(map(tuple, K)), L=tuple(map(tuple, L)), r=r)


def _check_smith(E, K, L, r) -> None:
    n = len(E)
    prod = matmul(matmul(K, E), L)
    diag = [[r[i] if i == j else 0 for j in range(n)] for i in range(n)]
    if prod != diag:
        raise ConsistencyError("K E L is not the diagonal of invariant factors")
    if abs(int_det(K)) != 1 or abs(int_det(L)) != 1:
        raise ConsistencyError("transformation matrices are not unimodular")
    if any(x <= 0 for x in r) or any(r[i + 1] % r[i] for i in range(n - 1)):
        raise ConsistencyError(f"invariant factors {r} do not form a positive divisibility chain")
    if not smith_bound_holds(K, E):
        raise ConsistencyError("norm of K exceeds the a priori bound")


# --- diagonal systems --------------------------------------------------------


def diagonal_minimal_poly(r: Sequence[int], q: Sequence, ut: Sequence) -> UniPoly:
    """Monic minimal polynomial of sum_j ut_j Z_j on {Z_j^r_j = q_j}.

    Built as m_1 = Y^r_1 - q_1 ut_1^r_1 and
    m_i = Res_Z((Y - Z)^r_i - q_i ut_i^r_i, m_(i-1)(Z)), each resultant
    obtained by interpolation in Y. Every modulus is monic, so no division by
    a quantity depending on ``ut`` happens and the routine runs unchanged over
    jets.
    """
    n = len(r)
    m = UniPoly([-(Fraction(q[0]) * ut[0] ** r[0])] + [0] * (r[0] - 1) + [Fraction(1)])
    for i in range(1, n):
        ri = r[i]
        c = Fraction(q[i]) * ut[i] ** ri
        a = []
        for k in range(ri + 1):
            coef = Fraction(math.comb(ri, k) * (-1) ** (ri - k))
            term = UniPoly.monomial(ri - k, coef)
            if k == 0:
                term = term - UniPoly([c])
            a.append(term)
        m = bivariate_resultant_by_interpolation(a, m, ri * m.degree).monic()
    return m


def solve_V0_in_Z(r: Sequence[int], q: Sequence[Fraction], ut: Sequence[int]) -> GeometricSolution0D:
    """Geometric solution of Z_j^r_j = q_j with respect to ``ut``.

    The minimal polynomial routine is rerun over jets to read off the
    parametrizations. Raises :class:`NotSeparating` when ``ut`` fails to
    separate the points.
    """
    n = len(r)
    m_jet = diagonal_minimal_poly(r, q, seed_jets(ut))
    if not is_squarefree(jet_value_poly(m_jet)):
        raise NotSeparating("linear form does not separate the diagonal system")
    m, _, ws = parametrizations_from_jet(m_jet, n)
    for j in range(n):
        check = (_pow_mod(ws[j], r[j], m) - UniPoly([Fraction(q[j])])) % m
        if not check.is_zero():
            raise ConsistencyError(f"Z_{j}^{r[j]} != q_{j} on the computed solution")
    return GeometricSolution0D(tuple(Fraction(x) for x in ut), m, tuple(ws))


def _pow_mod(a: UniPoly, e: int, m: UniPoly) -> UniPoly:
    if e < 0:
        try:
            a = modular_inverse(a, m)
        except NotCoprime:
            raise ConsistencyError("a coordinate vanishes on a torus point") from None
        e = -e
    result = UniPoly([Fraction(1)]) % m
    base = a % m
    while e:
        if e & 1:
            result = (result * base) % m
        e >>= 1
        if e:
            base = (base * base) % m
    return result


def transport_to_X(solZ: GeometricSolution0D, K: Sequence[Sequence[int]], u: Sequence) -> GeometricSolution0D:
    """Move a Z-coordinate solution to X_i = prod_j Z_j^K[j][i] and the form ``u``.

    The new minimal polynomial is the characteristic polynomial of
    sum_i u_i X_i(Y~) modulo the old one; computing it over jets yields the
    parametrizations.
    """
    n = len(u)
    mt = solZ.m
    xs = []
    for i in range(n):
        acc = UniPoly([Fraction(1)]) % mt
        for j in range(n):
            if K[j][i]:
                acc = (acc * _pow_mod(solZ.w[j], K[j][i], mt)) % mt
        xs.append(acc)
    lam = seed_jets(u)
    ell = UniPoly()
    for i in range(n):
        ell = ell + xs[i].map_coeffs(lambda c, i=i: lam[i] * c)
    m_jet = charpoly_mod(ell, mt)
    if not is_squarefree(jet_value_poly(m_jet)):
        raise NotSeparating("linear form does not separate the start points")
    m, _, ws = parametrizations_from_jet(m_jet, n)
    return GeometricSolution0D(tuple(Fraction(x) for x in u), m, tuple(ws))


def start_system_polys(cell: MixedCell, family: SupportFamily, coeffs: Sequence[Dict]) -> List[SparsePoly]:
    """The cell-restricted start polynomials h^(0)_i."""
    out = []
    for i in range(family.n):
        pts = cell.points[family.class_of[i]]
        out.append(SparsePoly(tuple(pts), tuple(Fraction(coeffs[i].get(q, 0)) for q in pts)))
    return out


def start_points_in_Z(cell: MixedCell, family: SupportFamily, coeffs: Sequence[Dict],
                      ut: Sequence[int]) -> Tuple[GeometricSolution0D, Tuple[Tuple[int, ...], ...]]:
    """The start points in the diagonal coordinates Z, with the matrix K mapping back to X."""
    binom = cell_to_binomial(cell, family, coeffs)
    snf = smith_normal_form(binom.exponents)
    n = family.n
    # q_j = prod_i p_i^L[i][j]
    qs = []
    for j in range(n):
        val = Fraction(1)
        for i in range(n):
            val *= binom.rhs[i] ** snf.L[i][j]
        qs.append(val)
    return solve_V0_in_Z(snf.r, qs, ut), tuple(tuple(row) for row in snf.K)


def check_start_solution(sol: GeometricSolution0D, cell: MixedCell, family: SupportFamily,
                         coeffs: Sequence[Dict]) -> None:
    """Raise :class:`ConsistencyError` unless deg m = D_gamma and h^(0)_i(w) = 0 mod m."""
    if sol.m.degree != cell.d_gamma:
        raise ConsistencyError(f"start system has {sol.m.degree} points, expected {cell.d_gamma}")
    for f in start_system_polys(cell, family, coeffs):
        if not substitute_mod(f, sol.w, sol.m).is_zero():
            raise ConsistencyError("start solution fails the substitution check")


def solve_start_system(cell: MixedCell, family: SupportFamily, coeffs: Sequence[Dict],
                       ut: Sequence[int], u: Sequence) -> GeometricSolution0D:
    """Geometric solution of the start system of ``cell`` with respect to ``u``.

    Checks the substitution identity h^(0)_i(w) = 0 mod m and deg m = D_gamma.
    """
    solZ, K = start_points_in_Z(cell, family, coeffs, ut)
    sol = transport_to_X(solZ, K, u)
    check_start_solution(sol, cell, family, coeffs)
    return sol
