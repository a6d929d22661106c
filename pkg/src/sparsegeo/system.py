"""Sparse polynomial systems over Q, their JSON form, and geometric solutions."""

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .arith import UniPoly, format_rational, is_squarefree, to_rational
from .geometry import SupportFamily, group_supports

Point = Tuple[int, ...]


@dataclass(frozen=True)
class SparsePoly:
    """sum_k coefficients[k] * X^support[k].

    The support is the declared one: a point may carry a zero coefficient.
    """

    support: Tuple[Point, ...]
    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.support) != len(self.coefficients):
            raise ValueError("support and coefficient lists differ in length")
        if len(set(self.support)) != len(self.support):
            raise ValueError("repeated support point")

    @classmethod
    def from_terms(cls, terms: Dict[Point, object]) -> "SparsePoly":
        pts = sorted(terms)
        return cls(tuple(tuple(p) for p in pts), tuple(to_rational(terms[p]) for p in pts))

    @property
    def n(self) -> int:
        return len(self.support[0])

    def terms(self) -> List[Tuple[Point, Fraction]]:
        return list(zip(self.support, self.coefficients))

    def __call__(self, x: Sequence) -> Fraction:
        acc = Fraction(0)
        for q, c in self.terms():
            t = c
            for xi, e in zip(x, q):
                t *= Fraction(xi) ** e
            acc += t
        return acc

    def max_degree(self) -> int:
        return max(sum(q) for q in self.support)


@dataclass(frozen=True)
class SparseSystem:
    """n sparse polynomials in n variables."""

    n: int
    polynomials: Tuple[SparsePoly, ...]

    def __post_init__(self):
        if len(self.polynomials) != self.n:
            raise ValueError(f"expected {self.n} polynomials, got {len(self.polynomials)}")
        for f in self.polynomials:
            for q in f.support:
                if len(q) != self.n:
                    raise ValueError(f"exponent {q} has the wrong length")

    @property
    def supports(self) -> List[Tuple[Point, ...]]:
        return [f.support for f in self.polynomials]

    def family(self) -> SupportFamily:
        return group_supports(self.supports)

    def max_degree(self) -> int:
        return max(f.max_degree() for f in self.polynomials)

    def to_json(self) -> Dict:
        return {
            "n": self.n,
            "polynomials": [
                {"support": [list(q) for q in f.support],
                 "coefficients": [format_rational(c) for c in f.coefficients]}
                for f in self.polynomials
            ],
        }

    @classmethod
    def from_json(cls, data: Dict) -> "SparseSystem":
        n = int(data["n"])
        polys = []
        for entry in data["polynomials"]:
            support = tuple(tuple(int(x) for x in q) for q in entry["support"])
            coeffs = tuple(to_rational(c) for c in entry["coefficients"])
            polys.append(SparsePoly(support, coeffs))
        return cls(n, tuple(polys))

    @classmethod
    def load(cls, path: str) -> "SparseSystem":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class GeometricSolution0D:
    """Linear form u, its monic minimal polynomial m and X_k = w_k(Y) mod m."""

    u: Tuple[Fraction, ...]
    m: UniPoly
    w: Tuple[UniPoly, ...]

    @property
    def degree(self) -> int:
        return self.m.degree

    def to_json(self) -> Dict:
        return {
            "u": [format_rational(c) for c in self.u],
            "minimal_polynomial": [format_rational(c) for c in self.m.coeffs],
            "parametrizations": [[format_rational(c) for c in wk.coeffs] for wk in self.w],
        }

    @classmethod
    def from_json(cls, data: Dict) -> "GeometricSolution0D":
        u = tuple(to_rational(c) for c in data["u"])
        m = UniPoly([to_rational(c) for c in data["minimal_polynomial"]])
        w = tuple(UniPoly([to_rational(c) for c in wk]) for wk in data["parametrizations"])
        return cls(u, m, w)


def power_tables(ws: Sequence[UniPoly], m: UniPoly, degrees: Sequence[int]) -> List[List[UniPoly]]:
    """tables[i][k] = w_i^k mod m for k = 0..degrees[i]."""
    one = UniPoly([Fraction(1)]) % m if m.degree > 0 else UniPoly()
    tables = []
    for w, top in zip(ws, degrees):
        row = [one]
        for _ in range(top):
            row.append((row[-1] * w) % m)
        tables.append(row)
    return tables


def substitute_mod(f: SparsePoly, ws: Sequence[UniPoly], m: UniPoly, tables=None) -> UniPoly:
    """f(w_1(Y), ..., w_n(Y)) mod m(Y) over Q."""
    n = len(ws)
    if tables is None:
        degs = [max(q[i] for q in f.support) for i in range(n)]
        tables = power_tables(ws, m, degs)
    acc = UniPoly()
    for q, c in f.terms():
        if c == 0:
            continue
        term = UniPoly([c])
        for i in range(n):
            if q[i]:
                term = (term * tables[i][q[i]]) % m
        acc = acc + term
    return acc % m


def verify(solution: GeometricSolution0D, system: SparseSystem) -> bool:
    """m squarefree, u(w) = Y mod m, and f_i(w) = 0 mod m for every i, exactly."""
    m = solution.m
    if m.degree < 1 or m.lc() != 1 or not is_squarefree(m):
        return False
    if len(solution.w) != system.n or len(solution.u) != system.n:
        return False
    if any(wk.degree >= m.degree for wk in solution.w):
        return False
    form = UniPoly()
    for c, wk in zip(solution.u, solution.w):
        form = form + wk.scale(Fraction(c))
    if not ((form - UniPoly([0, 1])) % m).is_zero():
        return False
    degs = [max(max(q[i] for q in f.support) for f in system.polynomials) for i in range(system.n)]
    tables = power_tables(solution.w, m, degs)
    return all(substitute_mod(f, solution.w, m, tables).is_zero() for f in system.polynomials)
