import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsegeo.arith import UniPoly
from sparsegeo.benchmarks import random_system, unit_square_system
from sparsegeo.errors import PreconditionFailed
from sparsegeo.pipeline import (
    SolverConfig,
    draw_lifting,
    draw_perturbation,
    perturbation_range,
    solve,
)
from sparsegeo.system import GeometricSolution0D, SparsePoly, SparseSystem, verify


def P(*coeffs):
    return UniPoly([Fraction(c) for c in coeffs])


def univariate(*coeffs) -> SparseSystem:
    pts = tuple((k,) for k in range(len(coeffs)))
    return SparseSystem(1, (SparsePoly(pts, tuple(Fraction(c) for c in coeffs)),))


def points(sol: GeometricSolution0D, candidates):
    """Candidate points whose image under u is a root of m."""
    out = []
    for p in candidates:
        y = sum(Fraction(c) * Fraction(x) for c, x in zip(sol.u, p))
        if sol.m(y) == 0:
            out.append(tuple(w(y) for w in sol.w))
    return out


def test_two_rational_roots():
    f = univariate(2, -3, 1)
    report = solve(f, SolverConfig(seed=1))
    assert report.verified and report.solution.degree == 2
    assert points(report.solution, [(1,), (2,)]) == [(1,), (2,)]


def test_unit_square_degree():
    f = unit_square_system(random.Random(3))
    report = solve(f, SolverConfig(seed=3))
    assert report.D == 2
    assert report.solution.degree == 2
    assert verify(report.solution, f)


def test_double_root_at_origin():
    f = univariate(0, 0, 1)
    report = solve(f, SolverConfig(seed=0))
    assert report.solution.degree == 1
    assert report.solution.w[0] == P()
    assert report.to_json()["diagnostics"]["perturbed"] is True


def test_missing_origin():
    f = SparseSystem(1, (SparsePoly(((1,), (2,)), (Fraction(1), Fraction(1))),))
    with pytest.raises(PreconditionFailed):
        solve(f)


def test_verify_examples():
    sol = GeometricSolution0D((Fraction(1),), P(-1, 0, 1), (P(0, 1),))
    assert verify(sol, univariate(-1, 0, 1))
    assert not verify(sol, univariate(-2, 0, 1))


def test_perturbation_range():
    f = SparseSystem(2, (
        SparsePoly(((0, 0), (1, 0), (0, 2)), (Fraction(1), Fraction(2), Fraction(3))),
        SparsePoly(((0, 0), (1, 1), (2, 0)), (Fraction(1), Fraction(2), Fraction(3))),
    ))
    rho = 100
    assert perturbation_range(f, rho) == 4 * rho * 4 ** 5 + 2 * rho * 4 * 64
    g = draw_perturbation(f, SolverConfig(rho=rho), random.Random(0))
    top = perturbation_range(f, rho)
    assert all(1 <= c <= top for gi in g.polynomials for c in gi.coefficients)
    again = draw_perturbation(f, SolverConfig(rho=rho), random.Random(0))
    assert g == again


def test_perturbation_uses_declared_support():
    f = SparseSystem(1, (SparsePoly(((0,), (1,), (2,)), (Fraction(-1), Fraction(0), Fraction(1))),))
    g = draw_perturbation(f, SolverConfig(), random.Random(5))
    assert g.polynomials[0].support == ((0,), (1,), (2,))
    assert all(c != 0 for c in g.polynomials[0].coefficients)


def test_lifting_draw_is_reproducible():
    fam = unit_square_system(random.Random(0)).family()
    a = draw_lifting(fam, SolverConfig(), random.Random(9))
    b = draw_lifting(fam, SolverConfig(), random.Random(9))
    assert a[0] == b[0] and a[1] == b[1]


def test_json_is_byte_identical():
    f = random_system(2, random.Random(11), max_exponent=1)
    first = solve(f, SolverConfig(seed=4)).dumps()
    second = solve(f, SolverConfig(seed=4)).dumps()
    assert first == second
    doc = json.loads(first)
    assert list(doc) == ["u", "minimal_polynomial", "parametrizations", "D", "E", "E_prime",
                         "verified", "retries", "seed", "diagnostics"]
    assert verify(GeometricSolution0D.from_json(doc), f)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(rho=1)
    with pytest.raises(ValueError):
        SolverConfig(max_retries=0)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=6, deadline=None)
def test_random_univariate_systems(seed):
    f = random_system(1, random.Random(seed), max_exponent=5)
    report = solve(f, SolverConfig(seed=seed))
    assert verify(report.solution, f)
    assert report.solution.degree <= report.D
    assert report.height_first <= report.E
