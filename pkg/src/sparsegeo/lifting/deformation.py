"""Polynomials in X with coefficients in Q[T], and the deformations built from them."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from ..geometry import LiftingFunction, MixedCell, SupportFamily
from ..system import SparsePoly, SparseSystem

Point = Tuple[int, ...]


@dataclass(frozen=True)
class TPoly:
    """sum over terms (q, c, e) of c * X^q * T^e, with e >= 0."""

    terms: Tuple[Tuple[Point, Fraction, int], ...]

    @property
    def n(self) -> int:
        return len(self.terms[0][0])

    def degrees(self) -> List[int]:
        """Largest exponent of each variable."""
        return [max(q[i] for q, _, _ in self.terms) for i in range(self.n)]

    def at(self, t) -> SparsePoly:
        """Specialize T to a rational value."""
        acc: Dict[Point, Fraction] = {}
        t = Fraction(t)
        for q, c, e in self.terms:
            acc[q] = acc.get(q, Fraction(0)) + c * t ** e
        pts = sorted(acc)
        return SparsePoly(tuple(pts), tuple(acc[p] for p in pts))

    def t_degree(self) -> int:
        return max(e for _, _, e in self.terms)


def _merge(terms) -> TPoly:
    acc: Dict[Tuple[Point, int], Fraction] = {}
    for q, c, e in terms:
        acc[(q, e)] = acc.get((q, e), Fraction(0)) + Fraction(c)
    out = tuple((q, c, e) for (q, e), c in sorted(acc.items()) if c != 0)
    return TPoly(out)


@dataclass(frozen=True)
class DeformedSystem:
    """The lifted system h^ and, per cell normal gamma, the system h_gamma.

    ``hhat[i]`` has terms c_(i,q) X^q T^omega(q). For a normal gamma,
    ``hgamma[gamma][i]`` is T^(-shift_i) h^_i(T^gamma_1 X_1, ..., T^gamma_(n+1)),
    with shift_i the smallest exponent so that the cell's points sit at T^0.
    """

    hhat: Tuple[TPoly, ...]
    hgamma: Dict[Tuple[int, ...], Tuple[TPoly, ...]]
    shifts: Dict[Tuple[int, ...], Tuple[int, ...]]


def lifted_system(h: SparseSystem, family: SupportFamily, lift: LiftingFunction) -> Tuple[TPoly, ...]:
    out = []
    for i, f in enumerate(h.polynomials):
        ell = family.class_of[i]
        out.append(TPoly(tuple((q, c, lift(ell, q)) for q, c in f.terms())))
    return tuple(out)


def restrict_to_normal(hhat: Sequence[TPoly], gamma: Sequence[int]) -> Tuple[Tuple[TPoly, ...], Tuple[int, ...]]:
    """Substitute X_i -> T^gamma_i X_i, T -> T^gamma_(n+1) and divide out the lowest T power."""
    n = len(gamma) - 1
    polys, shifts = [], []
    for p in hhat:
        raw = [(q, c, sum(g * x for g, x in zip(gamma[:n], q)) + gamma[n] * e) for q, c, e in p.terms]
        low = min(e for _, _, e in raw)
        polys.append(TPoly(tuple((q, c, e - low) for q, c, e in raw)))
        shifts.append(low)
    return tuple(polys), tuple(shifts)


def build_deformation(h: SparseSystem, family: SupportFamily, lift: LiftingFunction,
                      cells: Sequence[MixedCell]) -> DeformedSystem:
    hhat = lifted_system(h, family, lift)
    hg, sh = {}, {}
    for cell in cells:
        hg[cell.gamma], sh[cell.gamma] = restrict_to_normal(hhat, cell.gamma)
    return DeformedSystem(hhat=hhat, hgamma=hg, shifts=sh)


def second_deformation(f: SparseSystem, g: SparseSystem) -> Tuple[TPoly, ...]:
    """F_i = f_i + (1 - T) g_i, so F(X, 0) = f + g and F(X, 1) = f."""
    out = []
    for fi, gi in zip(f.polynomials, g.polynomials):
        terms = [(q, c, 0) for q, c in fi.terms()]
        terms += [(q, c, 0) for q, c in gi.terms()]
        terms += [(q, -c, 1) for q, c in gi.terms()]
        out.append(_merge(terms))
    return tuple(out)


def constant_system(f: SparseSystem) -> Tuple[TPoly, ...]:
    """A system with no T dependence."""
    return tuple(_merge([(q, c, 0) for q, c in fi.terms()]) for fi in f.polynomials)
