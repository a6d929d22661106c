"""End-to-end solver: random draws, both deformations, retries and verification."""

import json
import logging
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    ConsistencyError,
    DegenerateLifting,
    PreconditionFailed,
    RetriesExhausted,
    SolverError,
    Unverifiable,
)
from .geometry import (
    LiftingFunction,
    MixedCell,
    SupportFamily,
    enumerate_mixed_cells,
    height_bound_E,
    height_bound_Eprime,
    lifting_range,
    mixed_volume,
    random_lifting,
)
from .homotopy import SecondDeformation, formal_newton_lift, specialize_and_cleanup
from .lifting.assembly import required_precision, specialize_T1, total_shift
from .lifting.polyhedral import polyhedral_curve
from .system import GeometricSolution0D, SparsePoly, SparseSystem, verify

log = logging.getLogger(__name__)

REDRAW_TAGS = ("lifting", "linear_form", "perturbation", "everything")
LIFTING_BLOCK = 32
LIFTING_GROWTH = 1.25


@dataclass
class SolverConfig:
    """Knobs of :func:`solve`.

    ``lifting_cap`` is the initial truncation of the sampling set of lifting
    values (None keeps the full set) and ``lifting_candidates`` the number
    of tie-free liftings compared; see :func:`draw_lifting`.
    ``precision_slack`` is the extra degree allowed when a Pade recovery
    fails at the nominal height bound; None means n.
    ``try_unperturbed`` runs the polyhedral stage on f itself before drawing
    a perturbation.
    """

    rho: int = 100
    seed: int = 0
    max_retries: int = 10
    precision_slack: Optional[int] = None
    lifting_cap: Optional[int] = 3
    lifting_candidates: int = 3
    try_unperturbed: bool = True
    threads: Optional[int] = None

    def __post_init__(self):
        if self.rho < 4:
            raise ValueError("rho must be at least 4")
        if self.max_retries < 1:
            raise ValueError("max_retries must be at least 1")

    def worker_count(self) -> int:
        if self.threads is not None:
            return max(1, self.threads)
        env = os.environ.get("SOLVER_THREADS")
        if env:
            return max(1, int(env))
        return os.cpu_count() or 1


@dataclass
class SolveReport:
    solution: GeometricSolution0D
    D: int
    E: int
    Eprime: int
    retries: Dict[str, int]
    verified: bool
    seed: int
    perturbed: bool
    escaped: int = 0
    merged: int = 0
    height_first: int = 0
    height_second: Optional[int] = None
    direct_failure: Optional[str] = None
    lifting_rejections: int = 0
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def total_retries(self) -> int:
        return sum(self.retries.values())

    def to_json(self) -> Dict:
        """Output document; timings are left out so the bytes are reproducible."""
        sol = self.solution.to_json()
        return {
            "u": sol["u"],
            "minimal_polynomial": sol["minimal_polynomial"],
            "parametrizations": sol["parametrizations"],
            "D": self.D,
            "E": self.E,
            "E_prime": self.Eprime,
            "verified": self.verified,
            "retries": {k: self.retries.get(k, 0) for k in REDRAW_TAGS},
            "seed": self.seed,
            "diagnostics": {
                "perturbed": self.perturbed,
                "escaped": self.escaped,
                "merged": self.merged,
                "height_first": self.height_first,
                "height_second": self.height_second,
                "direct_failure": self.direct_failure,
                "lifting_rejections": self.lifting_rejections,
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


# --- sampling sets ------------------------------------------------------------


def linear_form_range(n: int, rho: int, D: int) -> int:
    return 16 * n * rho * D ** 4


def cell_form_range(n: int, rho: int, d_gamma: int) -> int:
    return 4 * n * rho * d_gamma ** 3


def perturbation_range(system: SparseSystem, rho: int) -> int:
    n = system.n
    d = system.max_degree()
    total = sum(system.family().sizes)
    return 4 * rho * (n * d) ** (2 * n + 1) + 2 * rho * n * n * 2 ** total


def draw_perturbation(system: SparseSystem, config: SolverConfig, rng: random.Random) -> SparseSystem:
    """g with the declared support of f and coefficients drawn from the sampling set."""
    top = perturbation_range(system, config.rho)
    polys = []
    for f in system.polynomials:
        polys.append(SparsePoly(f.support, tuple(Fraction(rng.randint(1, top)) for _ in f.support)))
    return SparseSystem(system.n, tuple(polys))


def add_systems(f: SparseSystem, g: SparseSystem) -> SparseSystem:
    polys = []
    for fi, gi in zip(f.polynomials, g.polynomials):
        polys.append(SparsePoly(fi.support, tuple(a + b for a, b in zip(fi.coefficients, gi.coefficients))))
    return SparseSystem(f.n, tuple(polys))


# --- preconditions ------------------------------------------------------------


def check_preconditions(system: SparseSystem) -> SupportFamily:
    origin = (0,) * system.n
    for i, f in enumerate(system.polynomials):
        if origin not in f.support:
            raise PreconditionFailed("MissingOrigin", f"support {i} does not contain the origin")
    return system.family()


def lifting_cost(family: SupportFamily, lift: LiftingFunction, cells: Sequence[MixedCell]) -> Tuple[int, int]:
    """(estimated work, E) for lifting every cell to the precision Pade recovery needs.

    A cell of degree d lifted to precision P costs roughly d * P^2 big-number
    operations, since coefficient sizes grow linearly along the series.
    """
    E = height_bound_E(family, lift)
    nu = total_shift([(c.gamma, c.d_gamma) for c in cells])
    work = sum(c.d_gamma * required_precision(c.gamma, E, nu) ** 2 for c in cells)
    return work, E


def draw_lifting(family: SupportFamily, config: SolverConfig,
                 rng: random.Random) -> Tuple[LiftingFunction, List[MixedCell], int]:
    """Rejection-sample liftings whose mixed cells are free of ties; keep the cheapest.

    Values start in {1, ..., lifting_cap}. After every ``LIFTING_BLOCK``
    rejected draws the cap grows by the factor ``LIFTING_GROWTH``, never
    beyond the full sampling set. The first ``lifting_candidates`` tie-free
    draws are compared by :func:`lifting_cost`. Small values keep the height
    bound E, and with it the lifting precision, small. Returns the lifting,
    its mixed cells and the number of rejected draws.
    """
    full = lifting_range(family, config.rho)
    cap = float(full if config.lifting_cap is None else min(config.lifting_cap, full))
    rejected = 0
    best = None
    found = 0
    while found < config.lifting_candidates:
        lift = random_lifting(family, config.rho, rng, int(cap))
        try:
            cells = enumerate_mixed_cells(family, lift)
        except DegenerateLifting:
            rejected += 1
            if rejected % LIFTING_BLOCK == 0:
                cap = min(cap * LIFTING_GROWTH, float(full))
            continue
        found += 1
        cost = lifting_cost(family, lift, cells)[0] if config.lifting_candidates > 1 else 0
        if best is None or cost < best[0]:
            best = (cost, lift, cells)
    return best[1], best[2], rejected


# --- the two stages -----------------------------------------------------------


@dataclass
class _Draws:
    lift: Optional[LiftingFunction] = None
    cells: Optional[List[MixedCell]] = None
    D: int = 0
    u: Optional[Tuple[Fraction, ...]] = None
    cell_forms: Optional[List[Tuple[int, ...]]] = None
    cell_seeds: Optional[List[int]] = None
    g: Optional[SparseSystem] = None


def _polyhedral_stage(h: SparseSystem, family: SupportFamily, draws: _Draws, config: SolverConfig):
    n = h.n
    slack = n if config.precision_slack is None else config.precision_slack
    E = height_bound_E(family, draws.lift)
    curve, _, _ = polyhedral_curve(h, family, draws.lift, draws.cells, draws.u, draws.cell_forms,
                                   draws.cell_seeds, E, slack, config.worker_count())
    sol = specialize_T1(curve)
    if sol.degree != draws.D:
        raise ConsistencyError(f"polyhedral stage produced degree {sol.degree}, expected {draws.D}")
    return sol, E, curve.height()


def solve(system: SparseSystem, config: Optional[SolverConfig] = None) -> SolveReport:
    """Verified geometric solution of f_1 = ... = f_n = 0.

    The first attempt runs the polyhedral deformation on f itself and is
    accepted when it yields D distinct solutions. Otherwise f is perturbed
    to h = f + g, solved, and deformed back along f + (1 - T) g. Every
    detected failure of a random draw re-samples the draw named by the
    error's ``redraw`` tag, up to ``max_retries`` times.
    """
    config = config or SolverConfig()
    family = check_preconditions(system)
    n = system.n
    rng = random.Random(config.seed)
    retries = {k: 0 for k in REDRAW_TAGS}
    draws = _Draws()
    perturbed = not config.try_unperturbed
    direct_failure: Optional[str] = None
    timings: Dict[str, float] = {}
    lifting_rejections = 0
    slack = n if config.precision_slack is None else config.precision_slack
    Eprime = height_bound_Eprime(family)

    def redraw(tag: str) -> None:
        if tag in ("lifting", "everything"):
            draws.lift = None
        if tag in ("lifting", "linear_form", "everything"):
            draws.u = None
        if tag in ("perturbation", "everything"):
            draws.g = None

    while True:
        try:
            if draws.lift is None:
                draws.lift, draws.cells, rejected = draw_lifting(family, config, rng)
                lifting_rejections += rejected
                draws.D = mixed_volume(family, draws.cells)
                if draws.D == 0:
                    raise PreconditionFailed("ZeroMixedVolume", "the mixed volume is zero")
                draws.u = None
            if draws.u is None:
                top = linear_form_range(n, config.rho, draws.D)
                draws.u = tuple(Fraction(rng.randint(1, top)) for _ in range(n))
                draws.cell_forms = [tuple(rng.randint(1, cell_form_range(n, config.rho, c.d_gamma))
                                          for _ in range(n)) for c in draws.cells]
                draws.cell_seeds = [rng.getrandbits(64) for _ in draws.cells]
            if perturbed and draws.g is None:
                draws.g = draw_perturbation(system, config, rng)

            if not perturbed:
                t0 = time.perf_counter()
                try:
                    sol, E, h1 = _polyhedral_stage(system, family, draws, config)
                    if not verify(sol, system):
                        raise ConsistencyError("unperturbed solution fails the substitution check")
                except PreconditionFailed:
                    raise
                except SolverError as exc:
                    log.info("unperturbed attempt failed (%r); perturbing", exc)
                    direct_failure = type(exc).__name__
                    perturbed = True
                    continue
                timings["polyhedral"] = time.perf_counter() - t0
                report = SolveReport(sol, draws.D, E, Eprime, retries, True, config.seed, False,
                                     height_first=h1, lifting_rejections=lifting_rejections, timings=timings)
                break

            h = add_systems(system, draws.g)
            t0 = time.perf_counter()
            sol1, E, h1 = _polyhedral_stage(h, family, draws, config)
            if not verify(sol1, h):
                raise ConsistencyError("perturbed solution fails the substitution check")
            t1 = time.perf_counter()
            deformation = SecondDeformation.build(system, draws.g)
            curve, _ = formal_newton_lift(sol1, deformation, slack)
            cleanup = specialize_and_cleanup(curve, system)
            t2 = time.perf_counter()
            timings.update(polyhedral=t1 - t0, second=t2 - t1)
            report = SolveReport(cleanup.solution, draws.D, E, Eprime, retries, True, config.seed, True,
                                 escaped=cleanup.escaped, merged=cleanup.merged, height_first=h1,
                                 height_second=curve.height(), direct_failure=direct_failure,
                                 lifting_rejections=lifting_rejections, timings=timings)
            break
        except (PreconditionFailed, ConsistencyError):
            raise
        except SolverError as exc:
            tag = exc.redraw
            if tag is None:
                raise
            retries[tag] += 1
            log.info("retrying after %r (redraw %s)", exc, tag)
            if sum(retries.values()) > config.max_retries:
                raise RetriesExhausted(exc, dict(retries)) from exc
            redraw(tag)

    if not verify(report.solution, system):
        raise Unverifiable("final solution fails the substitution check")
    return report
