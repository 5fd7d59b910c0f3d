"""Bob-graph size of the MSBMM-verification game against m log2 m.

    python scripts/size_growth.py --max-m 64
"""

import argparse
from dataclasses import dataclass

import numpy as np

from simgames.reductions import msbmm_verify_to_2trg


@dataclass(frozen=True)
class GrowthExperiment:
    min_m: int = 2
    max_m: int = 64


def bob_vertices(m: int) -> tuple[int, int]:
    A = np.arange(m, dtype=np.float64)[None, :]
    inst = msbmm_verify_to_2trg(A, np.eye(m, dtype=bool), A)
    return inst.size, inst.game.n1


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-m", type=int, default=GrowthExperiment.min_m)
    ap.add_argument("--max-m", type=int, default=GrowthExperiment.max_m)
    args = ap.parse_args()
    exp = GrowthExperiment(args.min_m, args.max_m)
    print("m\tpadded\t|V1|\t|V1|/(m log2 m)")
    for m in range(exp.min_m, exp.max_m + 1):
        N, n1 = bob_vertices(m)
        print(f"{m}\t{N}\t{n1}\t{n1 / (m * np.log2(m)):.2f}")


if __name__ == "__main__":
    main()
