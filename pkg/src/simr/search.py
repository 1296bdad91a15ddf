"""The expanding-rectangle trace and bitext map assembly."""

from __future__ import annotations

import warnings
from bisect import bisect_left
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .axes import AxisMap, TokenRules, tokenize_cognate_mode, tokenize_lexicon_mode
from .geometry import BitextMap, BitextSpace, Point, Rect
from .matching import PointGenerator, PredicateConfig, TranslationLexicon
from .recognizer import Chain, SimrParams, best_chain, filter_noise, find_chains


class SignalTooSparse(UserWarning):
    """No chain was accepted anywhere; the map is just origin to terminus."""


@dataclass(frozen=True)
class SearchConfig:
    initial_width: float = 20.0
    # small steps keep the first successful rectangle close to its anchor, so
    # the trace re-enters the map near a gap instead of far beyond it
    growth_factor: float = 1.1
    max_expansions: int = 100

    def __post_init__(self):
        if self.initial_width <= 0:
            raise ValueError("initial_width must be > 0")
        if self.growth_factor <= 1:
            raise ValueError("growth_factor must be > 1")
        if self.max_expansions < 0:
            raise ValueError("max_expansions must be >= 0")


@dataclass(frozen=True)
class SearchRect:
    anchor: Point
    width: float
    height: float

    def clip(self, space: BitextSpace) -> Rect:
        return Rect(self.anchor.x, self.anchor.y,
                    min(self.anchor.x + self.width, space.width),
                    min(self.anchor.y + self.height, space.height))

    def expanded(self, factor: float) -> "SearchRect":
        return SearchRect(self.anchor, self.width * factor, self.height * factor)


def _strict_lis(points: Sequence[Point]) -> list[Point]:
    """Longest chain strictly increasing in both x and y.

    ``points`` must be sorted by x ascending; equal-x runs are reversed on y
    so a strictly increasing y subsequence never takes two points of one column.
    """
    ordered = sorted(points, key=lambda p: (p.x, -p.y))
    tails: list[float] = []
    tail_idx: list[int] = []
    prev: list[int] = [-1] * len(ordered)
    for i, p in enumerate(ordered):
        j = bisect_left(tails, p.y)
        if j == len(tails):
            tails.append(p.y)
            tail_idx.append(i)
        else:
            tails[j] = p.y
            tail_idx[j] = i
        prev[i] = tail_idx[j - 1] if j else -1
    out = []
    i = tail_idx[-1] if tail_idx else -1
    while i >= 0:
        out.append(ordered[i])
        i = prev[i]
    return out[::-1]


def assemble_map(chains: Sequence[Chain], space: BitextSpace) -> BitextMap:
    """Chain points plus origin and terminus, reduced to a strictly monotone polyline."""
    interior = {p for c in chains for p in c.points
                if 0 < p.x < space.width and 0 < p.y < space.height}
    kept = _strict_lis(sorted(interior))
    points = [space.origin, *kept, space.terminus]
    return BitextMap(space, points, list(chains), discarded=len(interior) - len(kept))


def run_search(ax: AxisMap, ay: AxisMap, params: SimrParams, cfg: SearchConfig | None = None,
               predicate: PredicateConfig | None = None, lexicon: TranslationLexicon | None = None,
               trace: list | None = None) -> BitextMap:
    """Trace chains from the origin to the terminus.

    Each cycle generates candidate points in the current rectangle, filters
    noise and looks for chains. No chain: grow the rectangle about its
    anchor. A chain: accept the best one and re-anchor at its top-right
    corner. After ``max_expansions`` fruitless growths the anchor jumps
    diagonally by the current width.

    If ``trace`` is given, ``(rect, chain)`` is appended for every acceptance.
    Warns :class:`SignalTooSparse` when nothing was accepted.
    """
    cfg = cfg or SearchConfig()
    predicate = predicate or PredicateConfig()
    space = BitextSpace(ax.text_length, ay.text_length)
    slope = space.slope()
    accepted: list[Chain] = []
    if len(ax) and len(ay):
        generate = PointGenerator(ax, ay, predicate, lexicon)
        rect = SearchRect(space.origin, cfg.initial_width, cfg.initial_width * slope)
        expansions = 0
        while rect.anchor.x < space.width and rect.anchor.y < space.height:
            region = rect.clip(space)
            candidates = filter_noise(generate(region), params)
            chains = find_chains(candidates, params, space) if len(candidates) >= params.chain_size else []
            if chains:
                chain = best_chain(chains)
                accepted.append(chain)
                if trace is not None:
                    trace.append((region, chain))
                rect = SearchRect(chain.anchor_corner, cfg.initial_width, cfg.initial_width * slope)
                expansions = 0
                continue
            if region.x1 >= space.width and region.y1 >= space.height:
                break
            expansions += 1
            if expansions > cfg.max_expansions:
                jump = Point(min(rect.anchor.x + rect.width, space.width),
                             min(rect.anchor.y + rect.height, space.height))
                rect = SearchRect(jump, cfg.initial_width, cfg.initial_width * slope)
                expansions = 0
            else:
                rect = rect.expanded(cfg.growth_factor)
    bmap = assemble_map(accepted, space)
    if not accepted:
        warnings.warn("no chain accepted; map degenerates to the main diagonal",
                      SignalTooSparse, stacklevel=2)
    return bmap


def build_axes(text_x: str, text_y: str, predicate: PredicateConfig,
               lexicon: TranslationLexicon | None = None,
               rules_x: TokenRules | None = None,
               rules_y: TokenRules | None = None) -> tuple[AxisMap, AxisMap]:
    """Axis maps suited to the predicate.

    Cognates need full tokenization; a lexicon alone only needs its own
    entries plotted. With both, the lexicon tokens are added to the full
    tokenization so multi-word entries still get positions.
    """
    maps = []
    for text, rules, vocab in ((text_x, rules_x, lexicon.x_side() if lexicon else set()),
                               (text_y, rules_y, lexicon.y_side() if lexicon else set())):
        if predicate.use_cognates:
            amap = tokenize_cognate_mode(text, rules)
            if predicate.use_lexicon and vocab:
                extra = tokenize_lexicon_mode(text, vocab, rules)
                amap = AxisMap(tuple(sorted(set(amap.tokens) | set(extra.tokens),
                                            key=lambda t: (t.position, t.start, t.end, t.surface))),
                               amap.text_length)
        else:
            amap = tokenize_lexicon_mode(text, vocab, rules)
        maps.append(amap)
    return maps[0], maps[1]


def map_texts(text_x: str, text_y: str, params: SimrParams | None = None,
              cfg: SearchConfig | None = None, predicate: PredicateConfig | None = None,
              lexicon: TranslationLexicon | None = None,
              rules_x: TokenRules | None = None, rules_y: TokenRules | None = None) -> BitextMap:
    predicate = predicate or PredicateConfig()
    ax, ay = build_axes(text_x, text_y, predicate, lexicon, rules_x, rules_y)
    return run_search(ax, ay, params or SimrParams(), cfg, predicate, lexicon)


def _map_job(args):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SignalTooSparse)
        return map_texts(*args)


def map_many(bitexts: Sequence[tuple[str, str]], params: SimrParams | None = None,
             cfg: SearchConfig | None = None, predicate: PredicateConfig | None = None,
             lexicon: TranslationLexicon | None = None, rules_x: TokenRules | None = None,
             rules_y: TokenRules | None = None, jobs: int = 1) -> list[BitextMap]:
    """Map several bitexts, up to ``jobs`` at a time. Traces share no state."""
    args = [(x, y, params, cfg, predicate, lexicon, rules_x, rules_y) for x, y in bitexts]
    if jobs <= 1 or len(args) <= 1:
        return [_map_job(a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_map_job, args))


def write_map(bmap: BitextMap, path: str | Path) -> None:
    lines = ["x\ty"]
    lines += [f"{p.x:.2f}\t{p.y:.2f}" for p in bmap.points]
    lines.append(f"# discarded: {bmap.discarded}")
    lines.append(f"# chains: {len(bmap.chains)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_map(path: str | Path, space: BitextSpace | None = None) -> BitextMap:
    """Read a map TSV. Without ``space`` the last point is taken as the terminus."""
    points = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line == "x\ty":
            continue
        x, y = line.split("\t")
        points.append(Point(float(x), float(y)))
    if len(points) < 2:
        raise ValueError(f"{path}: a map needs at least origin and terminus")
    if space is None:
        space = BitextSpace(round(points[-1].x), round(points[-1].y))
    return BitextMap(space, points)
