"""Wall-clock and peak traced memory of identity-bitext mapping by input size.

    python3 scripts/scaling.py --sizes 10000 40000 160000
"""

import argparse
import time
import tracemalloc

from simr.matching import PredicateConfig
from simr.search import map_texts
from simr.synthgen import random_source


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10_000, 40_000, 160_000])
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    exact = PredicateConfig(lcsr_threshold=1.0)
    print("chars\tseconds\tpeak_mib")
    for n in args.sizes:
        text = random_source(n, seed=7)
        best = float("inf")
        for _ in range(args.repeats):
            t = time.perf_counter()
            map_texts(text, text, predicate=exact)
            best = min(best, time.perf_counter() - t)
        tracemalloc.start()
        map_texts(text, text, predicate=exact)
        peak = tracemalloc.get_traced_memory()[1]
        tracemalloc.stop()
        print(f"{n}\t{best:.3f}\t{peak / 2**20:.1f}")


if __name__ == "__main__":
    main()
