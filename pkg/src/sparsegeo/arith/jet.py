"""First-order jets: a value together with its gradient.

A jet ``(a, g)`` stands for ``a + g . eps`` with ``eps_i eps_j = 0``, so
products keep only the linear part: ``(a, g)(b, h) = (ab, a h + b g)``.
Running any division-free (or unit-division) algorithm on jets seeded as
``Lambda_k = u_k + eps_k`` yields the result together with its exact
partial derivatives in the ``Lambda_k`` at ``u``.

The value and gradient entries may be rationals or any ring elements that
support ``+``, ``-`` and ``*`` (truncated power series, for instance).
"""

from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

from ..errors import JetSingular
from .poly import UniPoly, modular_inverse


class Jet:
    __slots__ = ("value", "grad")

    def __init__(self, value, grad: Sequence):
        self.value = value
        self.grad: Tuple = tuple(grad)

    @classmethod
    def variable(cls, value, index: int, n: int) -> "Jet":
        """The jet of the coordinate function ``Lambda_index`` at ``value``."""
        g = [0] * n
        g[index] = 1
        return cls(value, g)

    @classmethod
    def constant(cls, value, n: int) -> "Jet":
        return cls(value, [0] * n)

    # ring structure ---------------------------------------------------------

    def __add__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.value + other, self.grad)
        return Jet(self.value + other.value, [a + b for a, b in zip(self.grad, other.grad)])

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(-self.value, [-a for a in self.grad])

    def __sub__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.value - other, self.grad)
        return Jet(self.value - other.value, [a - b for a, b in zip(self.grad, other.grad)])

    def __rsub__(self, other) -> "Jet":
        return (-self) + other

    def __mul__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.value * other, [a * other for a in self.grad])
        a, b = self.value, other.value
        return Jet(a * b, [a * h + b * g for g, h in zip(self.grad, other.grad)])

    def __rmul__(self, other) -> "Jet":
        return Jet(other * self.value, [other * a for a in self.grad])

    def is_unit(self) -> bool:
        test = getattr(self.value, "is_unit", None)
        if test is not None:
            return test()
        return self.value != 0

    def inverse(self) -> "Jet":
        if not self.is_unit():
            raise JetSingular(f"jet with zero value: {self!r}")
        inv = Fraction(1, self.value) if isinstance(self.value, int) else 1 / self.value
        inv2 = inv * inv
        return Jet(inv, [-g * inv2 for g in self.grad])

    def __truediv__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            if other == 0:
                raise ZeroDivisionError("jet divided by zero")
            inv = 1 / Fraction(other) if isinstance(other, int) else 1 / other
            return self * inv
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Jet":
        return self.inverse() * other

    def __pow__(self, e: int) -> "Jet":
        if e < 0:
            return self.inverse() ** (-e)
        result = Jet(1, [0] * len(self.grad))
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Jet):
            return self.value == other.value and self.grad == other.grad
        return self.value == other and all(g == 0 for g in self.grad)

    def __hash__(self):
        return hash((self.value, self.grad))

    def __repr__(self) -> str:
        return f"Jet({self.value!r}, {list(self.grad)!r})"


def jet_value_poly(p: UniPoly) -> UniPoly:
    """Value part of a polynomial with jet coefficients."""
    return UniPoly([c.value if isinstance(c, Jet) else c for c in p.coeffs])


def jet_grad_poly(p: UniPoly, k: int) -> UniPoly:
    """k-th gradient component of a polynomial with jet coefficients."""
    return UniPoly([c.grad[k] if isinstance(c, Jet) else 0 for c in p.coeffs])


def seed_jets(u: Sequence) -> List[Jet]:
    """Jets ``Lambda_k = u_k + eps_k``."""
    n = len(u)
    return [Jet.variable(Fraction(u[k]), k, n) for k in range(n)]


def parametrizations_from_jet(m_jet: UniPoly, n: int) -> Tuple[UniPoly, List[UniPoly], List[UniPoly]]:
    """Split a jet-valued minimal polynomial into ``(m_u, [v_k], [w_k])``.

    ``v_k = -dm/dLambda_k`` satisfies ``m'(Y) X_k = v_k(Y)`` on the variety,
    and ``w_k = v_k / m' mod m_u`` is the direct parametrization.
    """
    m = jet_value_poly(m_jet)
    vs = [-jet_grad_poly(m_jet, k) for k in range(n)]
    if m.degree <= 0:
        return m, vs, [UniPoly() for _ in range(n)]
    dinv = modular_inverse(m.derivative(), m)
    ws = [(v * dinv) % m for v in vs]
    return m, vs, ws


def jet_lift_minpoly_algorithm(algorithm: Callable, u: Sequence) -> Tuple[UniPoly, List[UniPoly]]:
    """Rerun a minimal-polynomial procedure over jets to get parametrizations.

    ``algorithm`` maps a list of n coefficients (rationals or jets) of the
    linear form to the monic minimal polynomial of that form on the variety.
    It is evaluated once with ``Lambda_k = u_k + eps_k``; the value part is
    ``m_u`` and ``v_k = -dm_U/dLambda_k`` at ``Lambda = u``.

    Returns ``(m_u, [w_1, ..., w_n])`` with ``X_k = w_k(Y)`` modulo ``m_u``.
    Raises :class:`JetSingular` if the procedure divides by a jet with zero
    value (the caller re-draws ``u``), and :class:`NotCoprime` if ``m_u`` is
    not squarefree.
    """
    n = len(u)
    m_jet = algorithm(seed_jets(u))
    m, _, ws = parametrizations_from_jet(m_jet, n)
    return m, ws
