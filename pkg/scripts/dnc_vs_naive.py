"""Divide-and-conquer vs linear solver on random acyclic two-tokens games.

Checks agreement and recursion depth on every instance and reports median
times per size.

    python scripts/dnc_vs_naive.py --sizes 8,16,32,64 --trials 10
"""

import argparse
import statistics
import time
from dataclasses import dataclass

import numpy as np

from simgames.dnc import DncStats, solve_acyclic_dnc
from simgames.games import solve_reachability
from simgames.generators import InstanceConfig, random_2trg
from simgames.twotokens import materialize_2trg


@dataclass(frozen=True)
class DncExperiment:
    sizes: tuple = (8, 16, 32, 64)
    trials: int = 10
    edge_prob: float = 0.2
    base_threshold: int = 16
    backend: str = "bitpacked"
    seed: int = 0


def run(exp: DncExperiment) -> None:
    rng = np.random.default_rng(exp.seed)
    print("n\tnaive_s\tdnc_s\tmax_depth\tbound\tagree")
    for n in exp.sizes:
        t_naive, t_dnc, depth, agree = [], [], 0, True
        for _ in range(exp.trials):
            t = random_2trg(rng, n, n, InstanceConfig(edge_prob=exp.edge_prob, acyclic=True))
            t0 = time.perf_counter()
            want = solve_reachability(materialize_2trg(t)).surv0
            t_naive.append(time.perf_counter() - t0)
            stats = DncStats()
            t0 = time.perf_counter()
            got = solve_acyclic_dnc(t, 0, backend=exp.backend,
                                    base_threshold=exp.base_threshold, stats=stats)
            t_dnc.append(time.perf_counter() - t0)
            agree &= bool(np.array_equal(got, want))
            depth = max(depth, stats.max_depth)
        bound = DncStats().depth_bound(n, n)
        print(f"{n}\t{statistics.median(t_naive):.4f}\t{statistics.median(t_dnc):.4f}"
              f"\t{depth}\t{bound}\t{agree}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default=None)
    ap.add_argument("--trials", type=int, default=DncExperiment.trials)
    ap.add_argument("--base-threshold", type=int, default=DncExperiment.base_threshold)
    ap.add_argument("--seed", type=int, default=DncExperiment.seed)
    args = ap.parse_args()
    sizes = tuple(int(x) for x in args.sizes.split(",")) if args.sizes else DncExperiment.sizes
    run(DncExperiment(sizes=sizes, trials=args.trials,
                      base_threshold=args.base_threshold, seed=args.seed))


if __name__ == "__main__":
    main()
