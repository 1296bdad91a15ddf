"""Anneal the four recognizer parameters on a synthetic training set.

Writes the annealing history as TSV and prints the best trial next to the
shipped defaults and their score on a held-out bitext.

    python3 scripts/anneal_demo.py --history /tmp/history.tsv
"""

import argparse
import warnings

from simr.evaluation import rms_perpendicular_error
from simr.matching import PredicateConfig
from simr.optimizer import AnnealConfig, TrainingBitext, anneal, history_tsv, objective
from simr.recognizer import SimrParams
from simr.search import SignalTooSparse, build_axes, run_search
from simr.synthgen import DistortionSpec, generate, random_source


def bitext(seed, chars, spec_kw):
    b = generate(random_source(chars, seed=seed), DistortionSpec(rng_seed=seed, **spec_kw))
    ax, ay = build_axes(b.text_x, b.text_y, PredicateConfig())
    return TrainingBitext(ax, ay, b.gold)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--chars", type=int, default=6000)
    ap.add_argument("--train", type=int, default=2, help="number of training bitexts")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--steps", type=int, default=10)
    ap.add_argument("--history")
    args = ap.parse_args()

    noise = dict(substitution_rate=0.2, inversion_rate=0.05, length_jitter=0.4)
    training = [bitext(100 + i, args.chars, noise) for i in range(args.train)]
    held_out = bitext(999, args.chars, noise)

    best, history = anneal(AnnealConfig(rng_seed=args.seed, steps_per_temperature=args.steps), training)
    if args.history:
        with open(args.history, "w", encoding="utf-8") as fh:
            fh.write(history_tsv(history))

    warnings.simplefilter("ignore", SignalTooSparse)
    print("params\ttrain_rms\theld_out_rms")
    for name, params in (("defaults", SimrParams()), ("annealed", best.params)):
        test = rms_perpendicular_error(run_search(held_out.ax, held_out.ay, params), held_out.gold)
        print(f"{name}\t{objective(params, training):.3f}\t{test.rms_error:.3f}")
    print()
    print(best.params.dumps(), end="")


if __name__ == "__main__":
    main()
