"""Command-line interface: solve, mixed-volume, subdivide, verify."""

import argparse
import json
import logging
import random
import sys
from typing import List, Optional

from .errors import PreconditionFailed, RetriesExhausted, SolverError, Unverifiable
from .geometry import mixed_volume, mixed_volume_oracle
from .pipeline import SolverConfig, check_preconditions, draw_lifting, solve
from .system import GeometricSolution0D, SparseSystem, verify

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PRECONDITION = 2
EXIT_RETRIES = 3
EXIT_UNVERIFIED = 4

log = logging.getLogger("sparsegeo")


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _cmd_solve(args) -> int:
    system = SparseSystem.load(args.input)
    config = SolverConfig(rho=args.rho, seed=args.seed, max_retries=args.max_retries)
    report = solve(system, config)
    if args.verify and not verify(GeometricSolution0D.from_json(report.to_json()), system):
        log.error("re-verification of the serialized solution failed")
        return EXIT_UNVERIFIED
    _write(report.dumps(), args.output)
    for stage, seconds in report.timings.items():
        log.info("%s stage: %.3f s", stage, seconds)
    return EXIT_OK


def _cmd_mixed_volume(args) -> int:
    system = SparseSystem.load(args.input)
    family = check_preconditions(system)
    if args.oracle:
        mv = mixed_volume_oracle(system.supports)
    else:
        _, cells, _ = draw_lifting(family, SolverConfig(seed=args.seed), random.Random(args.seed))
        mv = mixed_volume(family, cells)
    print(mv)
    return EXIT_OK


def _cmd_subdivide(args) -> int:
    system = SparseSystem.load(args.input)
    family = check_preconditions(system)
    lift, cells, rejected = draw_lifting(family, SolverConfig(seed=args.seed), random.Random(args.seed))
    doc = {
        "lifting": [[{"point": list(q), "value": w} for q, w in cls] for cls in lift.values],
        "mixed_cells": [c.to_json() for c in cells],
        "mixed_volume": mixed_volume(family, cells),
        "rejected_liftings": rejected,
    }
    _write(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    system = SparseSystem.load(args.input)
    with open(args.solution) as fh:
        sol = GeometricSolution0D.from_json(json.load(fh))
    ok = verify(sol, system)
    print("verified" if ok else "not verified")
    return EXIT_OK if ok else EXIT_UNVERIFIED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparsegeo", description="Exact geometric solutions of sparse systems over Q.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a verified geometric solution")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rho", type=int, default=100)
    p.add_argument("--max-retries", type=int, default=10)
    p.add_argument("--verify", action="store_true", help="re-check the serialized output before writing it")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("mixed-volume", help="mixed volume of the supports")
    p.add_argument("input")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracle", action="store_true", help="use inclusion-exclusion instead of mixed cells")
    p.set_defaults(func=_cmd_mixed_volume)

    p = sub.add_parser("subdivide", help="random lifting and its mixed cells")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_subdivide)

    p = sub.add_parser("verify", help="check a solution file against a system")
    p.add_argument("input")
    p.add_argument("solution")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PreconditionFailed as exc:
        log.error("precondition failed: %s", exc)
        return EXIT_PRECONDITION
    except RetriesExhausted as exc:
        log.error("%s", exc)
        return EXIT_RETRIES
    except Unverifiable as exc:
        log.error("%s", exc)
        return EXIT_UNVERIFIED
    except SolverError as exc:
        log.error("solver error: %r", exc)
        return EXIT_ERROR
    except ValueError as exc:
        log.error("invalid input: %s", exc)
        return EXIT_PRECONDITION
