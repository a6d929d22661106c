"""Solve random systems and print one line of statistics per system.

    python scripts/benchmark.py --n 2 --max-exponent 2 --count 10
    python scripts/benchmark.py --n 2 --count 5 --perturb
"""

import argparse
import random
import time

from sparsegeo.benchmarks import random_system
from sparsegeo.pipeline import SolverConfig, solve
from sparsegeo.system import verify


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--max-exponent", type=int, default=2)
    parser.add_argument("--max-points", type=int, default=6)
    parser.add_argument("--count", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--perturb", action="store_true", help="skip the unperturbed attempt")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    header = f"{'#':>3} {'D':>3} {'deg':>3} {'E':>4} {'h1':>4} {'E_pr':>4} {'h2':>4} {'retry':>5} {'rej':>4} {'secs':>7}"
    print(header)
    total = 0.0
    for k in range(args.count):
        system = random_system(args.n, rng, max_points=args.max_points, max_exponent=args.max_exponent)
        start = time.perf_counter()
        report = solve(system, SolverConfig(seed=args.seed + k, try_unperturbed=not args.perturb))
        secs = time.perf_counter() - start
        total += secs
        assert verify(report.solution, system)
        h2 = "-" if report.height_second is None else report.height_second
        print(f"{k:>3} {report.D:>3} {report.solution.degree:>3} {report.E:>4} {report.height_first:>4} "
              f"{report.Eprime:>4} {h2:>4} {report.total_retries:>5} {report.lifting_rejections:>4} {secs:>7.2f}",
              flush=True)
    print(f"total {total:.1f} s, mean {total / max(args.count, 1):.2f} s")


if __name__ == "__main__":
    main()
