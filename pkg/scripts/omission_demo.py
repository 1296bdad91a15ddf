"""Recovery after a block omitted from the x text, for several growth factors.

Reports, per seed, the RMS error over gold points well away from the gap, with
and without the omission. A ratio near 1 means the trace found its way back
to the true map right after the gap.

    python3 scripts/omission_demo.py --growth 1.1 1.5 --seeds 6
"""

import argparse
import warnings

from simr.evaluation import GoldTBM, rms_perpendicular_error
from simr.search import SearchConfig, SignalTooSparse, map_texts
from simr.synthgen import DistortionSpec, generate, random_source


def far(gold, lo, hi):
    return GoldTBM(tuple(p for p in gold if p.x < lo or p.x > hi))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--chars", type=int, default=10_000)
    ap.add_argument("--at", type=int, default=5000)
    ap.add_argument("--length", type=int, default=500)
    ap.add_argument("--margin", type=int, default=200)
    ap.add_argument("--substitution", type=float, default=0.1)
    ap.add_argument("--jitter", type=float, default=0.2)
    ap.add_argument("--growth", type=float, nargs="+", default=[1.1, 1.5])
    ap.add_argument("--seeds", type=int, default=6)
    args = ap.parse_args()

    warnings.simplefilter("ignore", SignalTooSparse)
    print("growth\tseed\tbaseline_rms\tomission_rms\tratio")
    for growth in args.growth:
        cfg = SearchConfig(growth_factor=growth)
        for seed in range(args.seeds):
            src = random_source(args.chars, seed=seed)
            base = generate(src, DistortionSpec(args.substitution, (), 0.0, args.jitter, seed))
            cut = generate(src, DistortionSpec(args.substitution, ((args.at, args.length),), 0.0,
                                               args.jitter, seed))
            lo = args.at - args.margin
            r_base = rms_perpendicular_error(map_texts(base.text_x, base.text_y, cfg=cfg),
                                             far(base.gold, lo, args.at + args.length + args.margin)).rms_error
            r_cut = rms_perpendicular_error(map_texts(cut.text_x, cut.text_y, cfg=cfg),
                                            far(cut.gold, lo, args.at + args.margin)).rms_error
            ratio = r_cut / r_base if r_base else float("inf") if r_cut else 1.0
            print(f"{growth}\t{seed}\t{r_base:.3f}\t{r_cut:.3f}\t{ratio:.2f}")


if __name__ == "__main__":
    main()
