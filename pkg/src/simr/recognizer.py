"""Chain recognition with the localized noise filter."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Collection, Iterable

from .geometry import BitextSpace, LineFit, Point, least_squares_fit


class EmptyChainSet(ValueError):
    pass


@dataclass(frozen=True)
class SimrParams:
    """The four numbers the recognizer needs; the angle is in radians."""

    chain_size: int = 6
    max_point_dispersal: float = 15.0
    max_angle_deviation: float = math.radians(10.0)
    max_point_ambiguity: int = 1

    def __post_init__(self):
        if self.chain_size < 2:
            raise ValueError("chain_size must be >= 2")
        if self.max_point_dispersal <= 0:
            raise ValueError("max_point_dispersal must be > 0")
        if self.max_angle_deviation <= 0:
            raise ValueError("max_angle_deviation must be > 0")
        if self.max_point_ambiguity < 0:
            raise ValueError("max_point_ambiguity must be >= 0")

    @property
    def max_angle_deviation_deg(self) -> float:
        return math.degrees(self.max_angle_deviation)

    def dumps(self) -> str:
        return (f"chain_size: {self.chain_size}\n"
                f"max_point_dispersal: {self.max_point_dispersal!r}\n"
                f"max_angle_deviation_deg: {self.max_angle_deviation_deg!r}\n"
                f"max_point_ambiguity: {self.max_point_ambiguity}\n")

    @classmethod
    def loads(cls, text: str) -> "SimrParams":
        values = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise ValueError(f"bad parameter line: {raw!r}")
            values[key.strip()] = value.strip()
        known = {"chain_size", "max_point_dispersal", "max_angle_deviation_deg", "max_point_ambiguity"}
        if set(values) != known:
            missing = sorted(known - set(values))
            extra = sorted(set(values) - known)
            raise ValueError(f"parameter block mismatch; missing {missing}, unknown {extra}")
        return cls(int(values["chain_size"]), float(values["max_point_dispersal"]),
                   math.radians(float(values["max_angle_deviation_deg"])),
                   int(values["max_point_ambiguity"]))

    @classmethod
    def load(cls, path: str | Path) -> "SimrParams":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class Chain:
    points: tuple[Point, ...]
    fit: LineFit
    angle_deviation: float

    @property
    def anchor_corner(self) -> Point:
        return Point(max(p.x for p in self.points), max(p.y for p in self.points))

    def inversions(self) -> int:
        """Pairs of points ordered one way on x and the other way on y."""
        pts = sorted(self.points)
        return sum(1 for i, a in enumerate(pts) for b in pts[i + 1:] if b.y < a.y)


def ambiguity_level(p: Point, points: Collection[Point]) -> int:
    same_column = sum(1 for q in points if q.x == p.x)
    same_row = sum(1 for q in points if q.y == p.y)
    return same_column + same_row - 2


def ambiguity_levels(points: Iterable[Point]) -> dict[Point, int]:
    pts = set(points)
    cols = Counter(p.x for p in pts)
    rows = Counter(p.y for p in pts)
    return {p: cols[p.x] + rows[p.y] - 2 for p in pts}


def filter_noise(points: Iterable[Point], params: SimrParams) -> set[Point]:
    """Drop points whose ambiguity exceeds the threshold.

    Levels are computed once against the whole input; removing a point does
    not lower its neighbours' levels within the same call.
    """
    limit = params.max_point_ambiguity
    return {p for p, level in ambiguity_levels(points).items() if level <= limit}


def diagonal_order(points: Iterable[Point], space: BitextSpace) -> list[Point]:
    scale = space.width / space.height
    return sorted(points, key=lambda p: (p.x + p.y * scale, p.x, p.y))


def check_chain(window: tuple[Point, ...], params: SimrParams, space: BitextSpace) -> Chain | None:
    """The three filters: injectivity, dispersal, angle. Returns None on rejection."""
    if len({p.x for p in window}) != len(window) or len({p.y for p in window}) != len(window):
        return None
    fit = least_squares_fit(window)
    if fit.rms_dispersal > params.max_point_dispersal:
        return None
    deviation = abs(fit.angle - math.atan(space.slope()))
    if deviation > params.max_angle_deviation:
        return None
    return Chain(window, fit, deviation)


def find_chains(points: Iterable[Point], params: SimrParams, space: BitextSpace) -> list[Chain]:
    """Every window of ``chain_size`` consecutive points, in diagonal order, that passes."""
    ordered = diagonal_order(points, space)
    k = params.chain_size
    chains = []
    for i in range(len(ordered) - k + 1):
        chain = check_chain(tuple(ordered[i:i + k]), params, space)
        if chain is not None:
            chains.append(chain)
    return chains


def best_chain(chains: Iterable[Chain]) -> Chain:
    """Least dispersed chain; ties go to smaller angle deviation, then smaller corner x."""
    chains = list(chains)
    if not chains:
        raise EmptyChainSet("no chains to choose from")
    return min(chains, key=lambda c: (c.fit.rms_dispersal, c.angle_deviation,
                                      c.anchor_corner.x, c.anchor_corner.y))
