"""Boolean-product backends and product verification timings, as TSV.

    python scripts/bench_kernels.py --sizes 256,512,1024 --repeats 3
"""

import argparse
from dataclasses import dataclass, replace

from simgames.cli import BenchConfig, bench


@dataclass(frozen=True)
class KernelExperiment:
    sizes: tuple = (128, 256, 512, 1024)
    backends: tuple = ("naive", "bitpacked", "strassen_int")
    repeats: int = 3
    seed: int = 0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default=None)
    ap.add_argument("--repeats", type=int, default=None)
    ap.add_argument("--seed", type=int, default=None)
    args = ap.parse_args()
    exp = KernelExperiment()
    if args.sizes:
        exp = replace(exp, sizes=tuple(int(x) for x in args.sizes.split(",")))
    if args.repeats is not None:
        exp = replace(exp, repeats=args.repeats)
    if args.seed is not None:
        exp = replace(exp, seed=args.seed)

    print("kind\tn\tvariant\tmedian_s\tspeedup_vs_first")
    for kind, variants in (("bmm", exp.backends), ("verify", ("det", "freivalds"))):
        cfg = BenchConfig(sizes=exp.sizes, backends=variants, repeats=exp.repeats, seed=exp.seed)
        rows = bench(kind, cfg)
        for n in exp.sizes:
            here = [r for r in rows if r.n == n]
            ref = here[0].median
            for r in here:
                print(f"{r.tsv()}\t{ref / r.median:.1f}")


if __name__ == "__main__":
    main()
