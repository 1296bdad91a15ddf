"""Bitext space geometry: points, least-squares lines, interpolated maps.

Coordinates are character positions: x indexes the first text, y the second.
Everything here is a pure function on immutable values.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence


class DegenerateFit(ValueError):
    """All points share one x coordinate, so y-on-x regression is undefined."""


class Point(NamedTuple):
    x: float
    y: float


class Rect(NamedTuple):
    """Closed axis-aligned rectangle; boundary points count as inside."""

    x0: float
    y0: float
    x1: float
    y1: float

    def contains(self, p: Point) -> bool:
        return self.x0 <= p.x <= self.x1 and self.y0 <= p.y <= self.y1


@dataclass(frozen=True)
class BitextSpace:
    width: int
    height: int

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"bitext space needs positive sides, got {self.width}x{self.height}")

    @property
    def origin(self) -> Point:
        return Point(0.0, 0.0)

    @property
    def terminus(self) -> Point:
        return Point(float(self.width), float(self.height))

    def slope(self) -> float:
        return self.height / self.width

    def diagonal_angle(self) -> float:
        return math.atan2(self.height, self.width)

    def diagonal_length(self) -> float:
        return math.hypot(self.width, self.height)

    def contains(self, p: Point) -> bool:
        return 0 <= p.x <= self.width and 0 <= p.y <= self.height


@dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    rms_dispersal: float
    angle: float


def perpendicular_distance(p: Point, space: BitextSpace) -> float:
    """Signed distance from ``p`` to the main diagonal; positive above it."""
    return (p.y * space.width - p.x * space.height) / space.diagonal_length()


def least_squares_fit(points: Sequence[Point]) -> LineFit:
    """Ordinary least squares of y on x.

    ``rms_dispersal`` is the RMS of the points' perpendicular distances to the
    fitted line, not the vertical residuals.
    """
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points to fit a line")
    mx = sum(p.x for p in points) / n
    my = sum(p.y for p in points) / n
    sxx = 0.0
    sxy = 0.0
    for p in points:
        dx = p.x - mx
        sxx += dx * dx
        sxy += dx * (p.y - my)
    if sxx == 0.0:
        raise DegenerateFit("all points share the same x coordinate")
    slope = sxy / sxx
    intercept = my - slope * mx
    ss = 0.0
    for p in points:
        r = p.y - (slope * p.x + intercept)
        ss += r * r
    # perpendicular distance = vertical residual / sqrt(1 + slope^2)
    rms = math.sqrt(ss / n / (1.0 + slope * slope))
    return LineFit(slope, intercept, rms, math.atan(slope))


@dataclass
class BitextMap:
    """A monotone polyline through the bitext space, origin to terminus.

    ``chains`` keeps the accepted chains (with any points dropped from the
    polyline) for provenance; ``discarded`` counts the dropped points.
    """

    space: BitextSpace
    points: list[Point]
    chains: list = field(default_factory=list)
    discarded: int = 0

    def __post_init__(self):
        self._xs = [p.x for p in self.points]

    @property
    def is_degenerate(self) -> bool:
        return not self.chains

    def interpolate(self, x: float) -> float:
        return interpolate(self, x)

    def inverse(self, y: float) -> float:
        """x on the map at height ``y`` (the map is strictly increasing, so invertible)."""
        ys = [p.y for p in self.points]
        return _lerp([Point(p.y, p.x) for p in self.points], ys, y)


def _lerp(points: Sequence[Point], xs: Sequence[float], x: float) -> float:
    if x <= xs[0]:
        return points[0].y
    if x >= xs[-1]:
        return points[-1].y
    i = bisect_right(xs, x)
    a, b = points[i - 1], points[i]
    if a.x == x:
        return a.y
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)


def interpolate(bmap: BitextMap, x: float) -> float:
    """Piecewise-linear y of the map at ``x``; exact at the map's own points."""
    return _lerp(bmap.points, bmap._xs, x)


def diagonal_map(space: BitextSpace) -> BitextMap:
    return BitextMap(space, [space.origin, space.terminus])
