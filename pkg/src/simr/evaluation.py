"""Gold-standard ingestion and the RMS perpendicular error metric.

A gold map is a list of true points of correspondence taken from the ends of
hand-aligned segment pairs. Errors are measured against the interpolated map
along the direction perpendicular to the main diagonal. Positive error means
the gold point lies above the map.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate
from pathlib import Path
from typing import Iterable, Sequence

from .geometry import BitextMap, BitextSpace, Point, interpolate


class GoldError(ValueError):
    pass


class SegmentCountMismatch(GoldError):
    pass


class TextReconstructionMismatch(GoldError):
    pass


class EmptyGold(GoldError):
    pass


@dataclass(frozen=True)
class GoldTBM:
    tpcs: tuple[Point, ...]

    def __post_init__(self):
        for a, b in zip(self.tpcs, self.tpcs[1:]):
            if not (b.x > a.x and b.y > a.y):
                raise GoldError(f"gold points must increase strictly in both coordinates: {a} then {b}")

    def __len__(self):
        return len(self.tpcs)

    def __iter__(self):
        return iter(self.tpcs)


def gold_from_segments(segments_x: Sequence[str], segments_y: Sequence[str],
                       text_x: str | None = None, text_y: str | None = None) -> GoldTBM:
    if len(segments_x) != len(segments_y):
        raise SegmentCountMismatch(f"{len(segments_x)} x-segments vs {len(segments_y)} y-segments")
    for segs, text, side in ((segments_x, text_x, "x"), (segments_y, text_y, "y")):
        if text is not None and "".join(segs) != text:
            raise TextReconstructionMismatch(f"{side}-segments do not concatenate to the {side} text")
    ends_x = accumulate(len(s) for s in segments_x)
    ends_y = accumulate(len(s) for s in segments_y)
    return GoldTBM(tuple(Point(float(x), float(y)) for x, y in zip(ends_x, ends_y)))


# Segment files hold one segment per line; in-segment line breaks, tabs and
# backslashes are escaped so any text survives the round trip.
_ESCAPES = {"n": "\n", "r": "\r", "t": "\t", "\\": "\\"}


def escape_segment(s: str) -> str:
    return s.replace("\\", "\\\\").replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")


def unescape_segment(s: str) -> str:
    out = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == "\\" and i + 1 < len(s) and s[i + 1] in _ESCAPES:
            out.append(_ESCAPES[s[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def read_segments(path: str | Path) -> list[str]:
    with open(path, encoding="utf-8", newline="") as fh:
        data = fh.read()
    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [unescape_segment(line.removesuffix("\r")) for line in lines]


def write_segments(segments: Iterable[str], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for s in segments:
            fh.write(escape_segment(s) + "\n")


def load_gold(segments_x: str | Path, segments_y: str | Path,
              text_x: str | Path | None = None, text_y: str | Path | None = None) -> GoldTBM:
    """Read two aligned segment files; optional raw texts are checked for reconstruction."""
    raw_x = Path(text_x).read_text(encoding="utf-8") if text_x is not None else None
    raw_y = Path(text_y).read_text(encoding="utf-8") if text_y is not None else None
    return gold_from_segments(read_segments(segments_x), read_segments(segments_y), raw_x, raw_y)


@dataclass(frozen=True)
class Bin:
    low: float
    high: float
    count: int
    fraction: float


@dataclass(frozen=True)
class ErrorReport:
    rms_error: float
    signed_errors: tuple[float, ...]
    histogram: tuple[Bin, ...]

    @property
    def squared_sum(self) -> float:
        return sum(e * e for e in self.signed_errors)

    def to_tsv(self) -> str:
        lines = ["low\thigh\tcount\tfraction"]
        lines += [f"{b.low:g}\t{b.high:g}\t{b.count}\t{b.fraction:.4f}" for b in self.histogram]
        lines.append(f"rms\t{self.rms_error:.2f}")
        return "\n".join(lines) + "\n"


def histogram(errors: Sequence[float], bin_width: float = 10.0,
              limit: float | None = None) -> tuple[Bin, ...]:
    """Non-empty bins ``[k*w, (k+1)*w)``.

    With ``limit``, everything below ``-limit`` or at/above ``limit`` goes to
    an open-ended bin on that side.
    """
    counts: dict[tuple[float, float], int] = {}
    for e in errors:
        if limit is not None and e < -limit:
            key = (-math.inf, -limit)
        elif limit is not None and e >= limit:
            key = (limit, math.inf)
        else:
            k = math.floor(e / bin_width)
            key = (k * bin_width, (k + 1) * bin_width)
        counts[key] = counts.get(key, 0) + 1
    n = len(errors)
    return tuple(Bin(lo, hi, c, c / n) for (lo, hi), c in sorted(counts.items()))


def vertical_errors(bmap: BitextMap, gold: GoldTBM) -> list[float]:
    return [p.y - interpolate(bmap, p.x) for p in gold]


def horizontal_errors(bmap: BitextMap, gold: GoldTBM) -> list[float]:
    return [bmap.inverse(p.y) - p.x for p in gold]


def normal_errors(bmap: BitextMap, gold: GoldTBM, space: BitextSpace | None = None) -> list[float]:
    """Signed offset of each TPC from the map, measured along the diagonal's normal.

    Every point on the normal through a TPC shares its coordinate along the
    diagonal, and a bi-monotone map is strictly increasing in that coordinate,
    so the crossing is unique. Beyond the map's ends the end segments are
    extended.
    """
    space = space or bmap.space
    length = space.diagonal_length()
    dx, dy = space.width / length, space.height / length
    pts = bmap.points
    along = [p.x * dx + p.y * dy for p in pts]
    out = []
    for p in gold:
        s = p.x * dx + p.y * dy
        i = min(max(bisect_right(along, s), 1), len(pts) - 1)
        a, b = pts[i - 1], pts[i]
        f = (s - along[i - 1]) / (along[i] - along[i - 1])
        qx, qy = a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)
        out.append((p.y - qy) * dx - (p.x - qx) * dy)
    return out


def signed_errors(bmap: BitextMap, gold: GoldTBM, space: BitextSpace | None = None,
                  direction: str = "perpendicular") -> list[float]:
    """Per-TPC signed error, positive when the TPC lies above the map.

    ``vertical`` and ``horizontal`` are diagnostics that favour one text.
    """
    if direction == "perpendicular":
        return normal_errors(bmap, gold, space)
    if direction == "vertical":
        return vertical_errors(bmap, gold)
    if direction == "horizontal":
        return horizontal_errors(bmap, gold)
    raise ValueError(f"unknown error direction {direction!r}")


def rms_perpendicular_error(bmap: BitextMap, gold: GoldTBM, space: BitextSpace | None = None,
                            bin_width: float = 10.0, direction: str = "perpendicular") -> ErrorReport:
    if not len(gold):
        raise EmptyGold("no gold points to evaluate against")
    errs = signed_errors(bmap, gold, space, direction)
    rms = math.sqrt(sum(e * e for e in errs) / len(errs))
    return ErrorReport(rms, tuple(errs), histogram(errs, bin_width))
