"""Command-line front end.

Exit codes: 0 success, 1 error, 2 success with a degenerate (diagonal-only)
map. Data files carry no timing; timings go to stderr.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .axes import TokenRules, tokenize_cognate_mode, tokenize_lexicon_mode
from .evaluation import load_gold, read_segments, rms_perpendicular_error, write_segments
from .geometry import BitextSpace
from .matching import PredicateConfig, TranslationLexicon, load_faux_amis, load_word_list
from .optimizer import AnnealConfig, TrainingBitext, anneal, history_tsv, load_bounds, objective
from .recognizer import SimrParams
from .search import SearchConfig, build_axes, map_many, read_map, write_map
from .synthgen import DistortionSpec, generate, random_source

CONFIG_ENV = "SIMR_CONFIG"

EXIT_OK, EXIT_ERROR, EXIT_DEGENERATE = 0, 1, 2


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


def _need(path: str | None, what: str) -> Path:
    if path is None:
        raise CliError(f"missing {what}")
    p = Path(path)
    if not p.is_file():
        raise CliError(f"{what} not found: {p}")
    return p


def _read_text(path: str, what: str) -> str:
    return _need(path, what).read_text(encoding="utf-8")


_CONFIG_KEYS = {
    "chain_size": int, "max_point_dispersal": float, "max_angle_deviation_deg": float,
    "max_point_ambiguity": int, "initial_width": float, "growth_factor": float,
    "max_expansions": int, "lcsr_threshold": float, "min_cognate_length": int, "mode": str,
}


def read_config(path: Path) -> dict:
    """``key: value`` lines; see ``_CONFIG_KEYS`` for what is understood."""
    values = {}
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        if not sep or key not in _CONFIG_KEYS:
            raise CliError(f"{path}: unknown config line {raw!r}")
        values[key] = _CONFIG_KEYS[key](value.strip())
    return values


@dataclass
class RunConfig:
    params: SimrParams = field(default_factory=SimrParams)
    search: SearchConfig = field(default_factory=SearchConfig)
    predicate: PredicateConfig = field(default_factory=PredicateConfig)
    lexicon: TranslationLexicon | None = None
    rules_x: TokenRules | None = None
    rules_y: TokenRules | None = None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        conf: dict = {}
        config_path = args.config or os.environ.get(CONFIG_ENV)
        if config_path:
            conf = read_config(_need(config_path, "config file"))
        params = SimrParams()
        if any(k in conf for k in ("chain_size", "max_point_dispersal",
                                   "max_angle_deviation_deg", "max_point_ambiguity")):
            params = SimrParams(
                conf.get("chain_size", params.chain_size),
                conf.get("max_point_dispersal", params.max_point_dispersal),
                math.radians(conf.get("max_angle_deviation_deg", params.max_angle_deviation_deg)),
                conf.get("max_point_ambiguity", params.max_point_ambiguity))
        if getattr(args, "params", None):
            params = SimrParams.load(_need(args.params, "params file"))
        base = SearchConfig()
        search = SearchConfig(conf.get("initial_width", base.initial_width),
                              conf.get("growth_factor", base.growth_factor),
                              conf.get("max_expansions", base.max_expansions))

        mode = args.mode or conf.get("mode", "cognate")
        if mode not in ("cognate", "lexicon", "both"):
            raise CliError(f"unknown mode {mode!r}")
        lexicon = None
        if args.lexicon or mode != "cognate":
            lexicon = TranslationLexicon.load(_need(args.lexicon, "lexicon file"))
        predicate = PredicateConfig(
            lcsr_threshold=args.lcsr_threshold or conf.get("lcsr_threshold", 0.71),
            min_cognate_length=args.min_cognate_length or conf.get("min_cognate_length", 4),
            use_cognates=mode in ("cognate", "both"),
            use_lexicon=lexicon is not None,
            stop_list_x=load_word_list(_need(args.stop_x, "stop list")) if args.stop_x else frozenset(),
            stop_list_y=load_word_list(_need(args.stop_y, "stop list")) if args.stop_y else frozenset(),
            faux_amis=load_faux_amis(_need(args.faux_amis, "faux amis file")) if args.faux_amis else frozenset(),
        )
        rules_x = TokenRules.load(_need(args.rules_x, "token rules")) if args.rules_x else None
        rules_y = TokenRules.load(_need(args.rules_y, "token rules")) if args.rules_y else None
        return cls(params, search, predicate, lexicon, rules_x, rules_y)


def _add_predicate_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help=f"key: value config file (default: ${CONFIG_ENV})")
    p.add_argument("--params", help="four-field parameter block")
    p.add_argument("--mode", choices=("cognate", "lexicon", "both"))
    p.add_argument("--lexicon", help="source<TAB>target translation lexicon")
    p.add_argument("--stop-x", help="stop list for the x text")
    p.add_argument("--stop-y", help="stop list for the y text")
    p.add_argument("--faux-amis", help="x<TAB>y pairs that must never match")
    p.add_argument("--lcsr-threshold", type=float)
    p.add_argument("--min-cognate-length", type=int)
    p.add_argument("--rules-x", help="token rules for the x text")
    p.add_argument("--rules-y", help="token rules for the y text")


def cmd_map(args) -> int:
    conf = RunConfig.from_args(args)
    if args.manifest:
        jobs = []
        for raw in _read_text(args.manifest, "manifest").splitlines():
            if raw.strip() and not raw.startswith("#"):
                cells = raw.split("\t")
                if len(cells) != 3:
                    raise CliError(f"manifest lines need x<TAB>y<TAB>out: {raw!r}")
                jobs.append(cells)
    else:
        if not (args.x and args.y and args.out):
            raise CliError("map needs --x, --y and --out (or --manifest)")
        jobs = [(args.x, args.y, args.out)]
    texts = [(_read_text(x, "x text"), _read_text(y, "y text")) for x, y, _ in jobs]
    for (tx, ty), (x, y, _) in zip(texts, jobs):
        if not tx or not ty:
            raise CliError(f"empty input text in {x if not tx else y}")
    started = time.perf_counter()
    maps = map_many(texts, conf.params, conf.search, conf.predicate, conf.lexicon,
                    conf.rules_x, conf.rules_y, jobs=args.jobs)
    elapsed = time.perf_counter() - started
    status = EXIT_OK
    for bmap, (_, _, out) in zip(maps, jobs):
        write_map(bmap, out)
        print(f"{out}\tchains\t{len(bmap.chains)}\tdiscarded\t{bmap.discarded}")
        if bmap.is_degenerate:
            print(f"warning: no chain accepted for {out}; wrote the main diagonal", file=sys.stderr)
            status = EXIT_DEGENERATE
    print(f"time\t{elapsed:.3f}s", file=sys.stderr)
    return status


def _space_of(segments_x, segments_y) -> BitextSpace:
    return BitextSpace(sum(map(len, segments_x)), sum(map(len, segments_y)))


def cmd_eval(args) -> int:
    gx = _need(args.gold_x, "gold x-segments")
    gy = _need(args.gold_y, "gold y-segments")
    tx = _need(args.text_x, "x text") if args.text_x else None
    ty = _need(args.text_y, "y text") if args.text_y else None
    gold = load_gold(gx, gy, tx, ty)
    space = _space_of(read_segments(gx), read_segments(gy))
    bmap = read_map(_need(args.map, "map file"), space)
    report = rms_perpendicular_error(bmap, gold, space)
    if args.out:
        Path(args.out).write_text(report.to_tsv(), encoding="utf-8")
    print(f"rms\t{report.rms_error:.2f}")
    return EXIT_OK


def _training(args, conf: RunConfig) -> list[TrainingBitext]:
    rows = []
    if args.train:
        for raw in _read_text(args.train, "training manifest").splitlines():
            if raw.strip() and not raw.startswith("#"):
                cells = raw.split("\t")
                if len(cells) != 4:
                    raise CliError(f"training lines need x<TAB>y<TAB>gold_x<TAB>gold_y: {raw!r}")
                rows.append(cells)
    else:
        if not all((args.x, args.y, args.gold_x, args.gold_y)):
            raise CliError("optimize needs --x, --y, --gold-x, --gold-y (or --train)")
        rows.append((args.x, args.y, args.gold_x, args.gold_y))
    items = []
    for x, y, gx, gy in rows:
        tx, ty = _read_text(x, "x text"), _read_text(y, "y text")
        gold = load_gold(_need(gx, "gold x-segments"), _need(gy, "gold y-segments"), x, y)
        ax, ay = build_axes(tx, ty, conf.predicate, conf.lexicon, conf.rules_x, conf.rules_y)
        items.append(TrainingBitext(ax, ay, gold))
    return items


def cmd_optimize(args) -> int:
    conf = RunConfig.from_args(args)
    training = _training(args, conf)
    bounds = load_bounds(_need(args.bounds, "bounds file")) if args.bounds else None
    kwargs = dict(rng_seed=args.seed, initial=conf.params)
    if bounds:
        kwargs["param_bounds"] = bounds
    for name, value in (("initial_temperature", args.t0), ("cooling_rate", args.cooling),
                        ("steps_per_temperature", args.steps), ("min_temperature", args.t_min)):
        if value is not None:
            kwargs[name] = value
    cfg = AnnealConfig(**kwargs)
    started = time.perf_counter()
    best, history = anneal(cfg, training, conf.search, conf.predicate, conf.lexicon, args.direction)
    Path(args.history).write_text(history_tsv(history), encoding="utf-8")
    Path(args.best_params).write_text(best.params.dumps(), encoding="utf-8")
    default = objective(SimrParams(), training, conf.search, conf.predicate, conf.lexicon, args.direction)
    print(f"best\t{best.objective:.4f}")
    print(f"defaults\t{default:.4f}")
    print(f"time\t{time.perf_counter() - started:.3f}s", file=sys.stderr)
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.source:
        source = _read_text(args.source, "source text")
    elif args.random_chars:
        source = random_source(args.random_chars, seed=args.source_seed)
    else:
        raise CliError("generate needs --source or --random-chars")
    spans = []
    for item in args.omission or []:
        pos, sep, length = item.partition(":")
        if not sep:
            raise CliError(f"omission must be POS:LEN, got {item!r}")
        spans.append((int(pos), int(length)))
    spec = DistortionSpec(args.substitution_rate, tuple(spans), args.inversion_rate,
                          args.length_jitter, args.seed)
    bitext = generate(source, spec)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "x.txt").write_text(bitext.text_x, encoding="utf-8")
    (out / "y.txt").write_text(bitext.text_y, encoding="utf-8")
    write_segments(bitext.segments_x, out / "gold_x.txt")
    write_segments(bitext.segments_y, out / "gold_y.txt")
    print(f"tpcs\t{len(bitext.gold)}")
    return EXIT_OK


def cmd_tokenize(args) -> int:
    text = _read_text(args.text, "text")
    rules = TokenRules.load(_need(args.rules, "token rules")) if args.rules else None
    if args.lexicon:
        lex = TranslationLexicon.load(_need(args.lexicon, "lexicon file"))
        vocab = lex.x_side() if args.side == "x" else lex.y_side()
        amap = tokenize_lexicon_mode(text, vocab, rules)
    else:
        amap = tokenize_cognate_mode(text, rules)
    lines = ["surface\tkind\tstart\tend\tposition"]
    lines += [f"{t.surface}\t{t.kind}\t{t.start}\t{t.end}\t{t.position:.2f}" for t in amap]
    body = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="simr", description="Map bitext correspondence.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("map", help="map one bitext (or a manifest of them)")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--out")
    p.add_argument("--manifest", help="lines of x<TAB>y<TAB>out")
    p.add_argument("--jobs", type=int, default=1)
    _add_predicate_options(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("eval", help="RMS perpendicular error against gold segments")
    p.add_argument("--map", required=True)
    p.add_argument("--gold-x", required=True)
    p.add_argument("--gold-y", required=True)
    p.add_argument("--text-x")
    p.add_argument("--text-y")
    p.add_argument("--out", help="histogram TSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("optimize", help="anneal the four recognizer parameters")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--gold-x")
    p.add_argument("--gold-y")
    p.add_argument("--train", help="lines of x<TAB>y<TAB>gold_x<TAB>gold_y")
    p.add_argument("--bounds", help="lines of name: low high step")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t0", type=float)
    p.add_argument("--cooling", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--t-min", type=float)
    p.add_argument("--direction", choices=("perpendicular", "vertical", "horizontal"),
                   default="perpendicular")
    p.add_argument("--history", required=True)
    p.add_argument("--best-params", required=True)
    _add_predicate_options(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("generate", help="write a synthetic bitext with gold segments")
    p.add_argument("--source")
    p.add_argument("--random-chars", type=int)
    p.add_argument("--source-seed", type=int, default=0)
    p.add_argument("--substitution-rate", type=float, default=0.0)
    p.add_argument("--omission", action="append", metavar="POS:LEN")
    p.add_argument("--inversion-rate", type=float, default=0.0)
    p.add_argument("--length-jitter", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("tokenize", help="dump an axis map as TSV")
    p.add_argument("--text", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--side", choices=("x", "y"), default="x")
    p.add_argument("--rules")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tokenize)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, OSError, ValueError) as exc:
        print(f"simr {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
