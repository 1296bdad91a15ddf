"""Matching predicates and candidate point generation.

A predicate decides whether two tokens from opposite halves of a bitext are
plausibly mutual translations. Vetoes (stop lists, faux amis) run first, then
any of: exact number/punctuation match, LCSR cognates, lexicon lookup.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .axes import NUMBER, PUNCT, WORD, AxisMap, AxisToken, fold
from .geometry import Point, Rect


def lcs_length(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0]
        for j, cb in enumerate(b):
            if ca == cb:
                cur.append(prev[j] + 1)
            else:
                cur.append(cur[j] if cur[j] > prev[j + 1] else prev[j + 1])
        prev = cur
    return prev[-1]


def lcsr(a: str, b: str) -> float:
    """Longest Common Subsequence Ratio: |LCS(a, b)| / max(|a|, |b|)."""
    if not a or not b:
        raise ValueError("lcsr is undefined for empty strings")
    return lcs_length(a, b) / max(len(a), len(b))


def _read_pairs(path: str | Path, columns: int) -> list[tuple[str, ...]]:
    rows = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cells = line.split("\t")
        if len(cells) != columns:
            raise ValueError(f"{path}:{lineno}: expected {columns} tab-separated column(s), got {len(cells)}")
        rows.append(tuple(fold(c.strip()) for c in cells))
    return rows


def load_word_list(path: str | Path) -> frozenset[str]:
    return frozenset(r[0] for r in _read_pairs(path, 1))


def load_faux_amis(path: str | Path) -> frozenset[tuple[str, str]]:
    return frozenset(_read_pairs(path, 2))  # type: ignore[arg-type]


@dataclass(frozen=True)
class TranslationLexicon:
    """Directional (x-side, y-side) entries; surfaces are case-folded."""

    entries: frozenset[tuple[str, str]] = frozenset()

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "TranslationLexicon":
        return cls(frozenset((fold(a), fold(b)) for a, b in pairs))

    @classmethod
    def load(cls, path: str | Path) -> "TranslationLexicon":
        return cls(frozenset(_read_pairs(path, 2)))  # type: ignore[arg-type]

    def x_side(self) -> set[str]:
        return {a for a, _ in self.entries}

    def y_side(self) -> set[str]:
        return {b for _, b in self.entries}

    def __contains__(self, pair) -> bool:
        return pair in self.entries

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class PredicateConfig:
    lcsr_threshold: float = 0.71
    min_cognate_length: int = 4
    use_cognates: bool = True
    use_lexicon: bool = False
    stop_list_x: frozenset[str] = field(default_factory=frozenset)
    stop_list_y: frozenset[str] = field(default_factory=frozenset)
    faux_amis: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self):
        if not (0 < self.lcsr_threshold <= 1):
            raise ValueError("lcsr_threshold must lie in (0, 1]")
        if self.min_cognate_length < 1:
            raise ValueError("min_cognate_length must be >= 1")
        if not (self.use_cognates or self.use_lexicon):
            raise ValueError("enable cognates, the lexicon, or both")


def _cognate(a: str, b: str, threshold: float) -> bool:
    la, lb = len(a), len(b)
    longest = max(la, lb)
    # cheap upper bounds on the LCS before running the DP
    if min(la, lb) < threshold * longest:
        return False
    common = sum((Counter(a) & Counter(b)).values())
    if common < threshold * longest:
        return False
    return lcs_length(a, b) / longest >= threshold


def _match_surfaces(sx: str, kx: str, sy: str, ky: str,
                    cfg: PredicateConfig, lex: TranslationLexicon | None) -> bool:
    if sx in cfg.stop_list_x or sy in cfg.stop_list_y:
        return False
    if (sx, sy) in cfg.faux_amis:
        return False
    if kx in (NUMBER, PUNCT) and kx == ky and sx == sy:
        return True
    if (cfg.use_cognates and kx == WORD and ky == WORD
            and len(sx) >= cfg.min_cognate_length and len(sy) >= cfg.min_cognate_length
            and _cognate(sx, sy, cfg.lcsr_threshold)):
        return True
    if cfg.use_lexicon and lex is not None and (sx, sy) in lex.entries:
        return True
    return False


def match(tx: AxisToken, ty: AxisToken, cfg: PredicateConfig,
          lex: TranslationLexicon | None = None) -> bool:
    return _match_surfaces(tx.surface, tx.kind, ty.surface, ty.kind, cfg, lex)


class PointGenerator:
    """Candidate points for rectangles of one bitext.

    Holds the two axis maps, position indexes for range queries, and a cache
    of predicate decisions per surface pair, so a trace that revisits the
    same word types pays for each LCSR once.
    """

    def __init__(self, ax: AxisMap, ay: AxisMap, cfg: PredicateConfig,
                 lex: TranslationLexicon | None = None):
        self.ax, self.ay = ax, ay
        self.cfg, self.lex = cfg, lex
        self._xpos = ax.positions
        self._ypos = ay.positions
        self._cache: dict[tuple[str, str, str, str], bool] = {}

    def _pair(self, kx, ky) -> bool:
        key = (kx[0], kx[1], ky[0], ky[1])
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = _match_surfaces(kx[0], kx[1], ky[0], ky[1], self.cfg, self.lex)
        return hit

    def __call__(self, region: Rect) -> set[Point]:
        if region.x1 < region.x0 or region.y1 < region.y0:
            return set()
        xs = self.ax.tokens[bisect_left(self._xpos, region.x0):bisect_right(self._xpos, region.x1)]
        if not xs:
            return set()
        ys = self.ay.tokens[bisect_left(self._ypos, region.y0):bisect_right(self._ypos, region.y1)]
        if not ys:
            return set()
        gx: dict[tuple[str, str], list[float]] = defaultdict(list)
        gy: dict[tuple[str, str], list[float]] = defaultdict(list)
        for t in xs:
            gx[(t.surface, t.kind)].append(t.position)
        for t in ys:
            gy[(t.surface, t.kind)].append(t.position)
        points = set()
        for kx, px in gx.items():
            for ky, py in gy.items():
                if self._pair(kx, ky):
                    points.update(Point(x, y) for x in px for y in py)
        return points


def generate_points(region: Rect, ax: AxisMap, ay: AxisMap, cfg: PredicateConfig,
                    lex: TranslationLexicon | None = None) -> set[Point]:
    return PointGenerator(ax, ay, cfg, lex)(region)
