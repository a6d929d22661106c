"""How the initial lifting cap affects rejections, the height bound E and lifting work.

For each random support family, draws tie-free liftings with several caps
and reports the mean number of rejected draws, E and the lifting cost.

    python scripts/lifting_stats.py --n 2 --families 10
"""

import argparse
import random
import statistics

from sparsegeo.benchmarks import random_system
from sparsegeo.pipeline import SolverConfig, draw_lifting, lifting_cost


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--max-exponent", type=int, default=2)
    parser.add_argument("--families", type=int, default=10)
    parser.add_argument("--draws", type=int, default=5)
    parser.add_argument("--caps", type=int, nargs="+", default=[3, 10, 100, 0],
                        help="initial caps; 0 means the full sampling set")
    args = parser.parse_args()

    rng = random.Random(1)
    families = [random_system(args.n, rng, max_exponent=args.max_exponent).family() for _ in range(args.families)]
    print(f"{'cap':>6} {'rejected':>9} {'E':>7} {'work':>12}")
    for cap in args.caps:
        config = SolverConfig(lifting_cap=cap or None, lifting_candidates=1)
        rejected, heights, work = [], [], []
        for k, fam in enumerate(families):
            for d in range(args.draws):
                lift, cells, rej = draw_lifting(fam, config, random.Random(1000 * k + d))
                cost, E = lifting_cost(fam, lift, cells)
                rejected.append(rej)
                heights.append(E)
                work.append(cost)
        label = cap if cap else "full"
        print(f"{label:>6} {statistics.mean(rejected):>9.1f} {statistics.mean(heights):>7.1f} "
              f"{statistics.mean(work):>12.0f}", flush=True)


if __name__ == "__main__":
    main()
