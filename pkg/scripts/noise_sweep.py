"""RMS error of default-parameter maps as OCR-like substitution noise grows.

    python3 scripts/noise_sweep.py --chars 10000 --seeds 3
"""

import argparse
import warnings

from simr.evaluation import rms_perpendicular_error
from simr.search import SignalTooSparse, map_texts
from simr.synthgen import DistortionSpec, generate, random_source


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--chars", type=int, default=10_000)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--rates", type=float, nargs="+", default=[0.0, 0.05, 0.1, 0.15, 0.2, 0.3])
    ap.add_argument("--jitter", type=float, default=0.0)
    args = ap.parse_args()

    warnings.simplefilter("ignore", SignalTooSparse)
    print("rate\tseed\tchains\trms")
    for rate in args.rates:
        for seed in range(args.seeds):
            b = generate(random_source(args.chars, seed=seed),
                         DistortionSpec(substitution_rate=rate, length_jitter=args.jitter, rng_seed=seed))
            bmap = map_texts(b.text_x, b.text_y)
            rms = rms_perpendicular_error(bmap, b.gold).rms_error
            print(f"{rate:.2f}\t{seed}\t{len(bmap.chains)}\t{rms:.3f}")


if __name__ == "__main__":
    main()
