"""Simulated annealing over the four recognizer parameters.

The state is a point on a finite grid (one index per parameter), so every
trial lies exactly on the step grid and trials can be cached by index.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .axes import AxisMap
from .evaluation import GoldTBM, signed_errors
from .matching import PredicateConfig, TranslationLexicon
from .recognizer import SimrParams
from .search import SearchConfig, SignalTooSparse, run_search

PARAM_NAMES = ("chain_size", "max_point_dispersal", "max_angle_deviation_deg", "max_point_ambiguity")
INTEGER_PARAMS = ("chain_size", "max_point_ambiguity")


class InvalidBounds(ValueError):
    pass


@dataclass(frozen=True)
class ParamRange:
    low: float
    high: float
    step: float

    def values(self) -> list[float]:
        if self.step <= 0 or self.high < self.low:
            raise InvalidBounds(f"bad range {self}")
        n = int(math.floor((self.high - self.low) / self.step + 1e-9)) + 1
        return [self.low + i * self.step for i in range(n)]


DEFAULT_BOUNDS = {
    "chain_size": ParamRange(3, 12, 1),
    "max_point_dispersal": ParamRange(1.0, 40.0, 1.0),
    "max_angle_deviation_deg": ParamRange(1.0, 30.0, 1.0),
    "max_point_ambiguity": ParamRange(0, 6, 1),
}


@dataclass(frozen=True)
class AnnealConfig:
    initial_temperature: float = 2.0
    cooling_rate: float = 0.8
    steps_per_temperature: int = 10
    min_temperature: float = 0.05
    rng_seed: int = 0
    param_bounds: dict[str, ParamRange] = field(default_factory=lambda: dict(DEFAULT_BOUNDS))
    initial: SimrParams = field(default_factory=SimrParams)

    def __post_init__(self):
        if self.initial_temperature <= 0 or self.min_temperature <= 0:
            raise InvalidBounds("temperatures must be > 0")
        if not 0 < self.cooling_rate < 1:
            raise InvalidBounds("cooling_rate must lie in (0, 1)")
        if self.steps_per_temperature < 1:
            raise InvalidBounds("steps_per_temperature must be >= 1")
        if set(self.param_bounds) != set(PARAM_NAMES):
            raise InvalidBounds(f"bounds must cover exactly {PARAM_NAMES}")
        for name in INTEGER_PARAMS:
            r = self.param_bounds[name]
            if any(float(v) != int(v) for v in (r.low, r.step)):
                raise InvalidBounds(f"{name} moves in integer steps")

    def temperature_levels(self) -> int:
        if self.min_temperature >= self.initial_temperature:
            return 1
        ratio = math.log(self.min_temperature / self.initial_temperature) / math.log(self.cooling_rate)
        return max(1, math.ceil(ratio - 1e-9))


@dataclass(frozen=True)
class Trial:
    params: SimrParams
    objective: float


@dataclass(frozen=True)
class HistoryRow:
    step: int
    temperature: float
    trial: Trial
    accepted: bool


@dataclass(frozen=True)
class TrainingBitext:
    ax: AxisMap
    ay: AxisMap
    gold: GoldTBM


def _squared_errors(params: SimrParams, item: TrainingBitext, search: SearchConfig | None,
                    predicate: PredicateConfig | None, lexicon: TranslationLexicon | None,
                    direction: str) -> tuple[float, int]:
    with warnings.catch_warnings():
        # a degenerate map is still evaluable; its honest error is the penalty
        warnings.simplefilter("ignore", SignalTooSparse)
        bmap = run_search(item.ax, item.ay, params, search, predicate, lexicon)
    errs = signed_errors(bmap, item.gold, direction=direction)
    return sum(e * e for e in errs), len(errs)


def objective(params: SimrParams, training: Sequence[TrainingBitext],
              search: SearchConfig | None = None, predicate: PredicateConfig | None = None,
              lexicon: TranslationLexicon | None = None, direction: str = "perpendicular") -> float:
    """RMS error pooled over every gold point of every training bitext."""
    if not training:
        raise ValueError("training set is empty")
    total, count = 0.0, 0
    for item in training:
        s, n = _squared_errors(params, item, search, predicate, lexicon, direction)
        total += s
        count += n
    return math.sqrt(total / count)


class _Grid:
    def __init__(self, bounds: dict[str, ParamRange]):
        self.axes = [bounds[name].values() for name in PARAM_NAMES]

    def params(self, idx: tuple[int, ...]) -> SimrParams:
        cs, disp, ang, amb = (axis[i] for axis, i in zip(self.axes, idx))
        return SimrParams(int(round(cs)), float(disp), math.radians(ang), int(round(amb)))

    def nearest(self, p: SimrParams) -> tuple[int, ...]:
        target = (p.chain_size, p.max_point_dispersal, p.max_angle_deviation_deg, p.max_point_ambiguity)
        return tuple(min(range(len(axis)), key=lambda i: (abs(axis[i] - t), i))
                     for axis, t in zip(self.axes, target))

    def free(self) -> list[int]:
        return [k for k, axis in enumerate(self.axes) if len(axis) > 1]


def anneal(cfg: AnnealConfig, training: Sequence[TrainingBitext],
           search: SearchConfig | None = None, predicate: PredicateConfig | None = None,
           lexicon: TranslationLexicon | None = None,
           direction: str = "perpendicular") -> tuple[Trial, list[HistoryRow]]:
    """Anneal from ``cfg.initial`` (snapped to the grid).

    Each step nudges one free parameter by one grid step, clamped at the
    bounds. Improvements are always taken; otherwise the move is taken with
    probability ``exp(-delta / T)``. ``T`` shrinks geometrically after every
    ``steps_per_temperature`` proposals. Parameters whose range holds a
    single value stay fixed.
    """
    grid = _Grid(cfg.param_bounds)
    for name, axis in zip(PARAM_NAMES, grid.axes):
        if name == "chain_size" and axis[0] < 2:
            raise InvalidBounds("chain_size must be >= 2")
        if name in ("max_point_dispersal", "max_angle_deviation_deg") and axis[0] <= 0:
            raise InvalidBounds(f"{name} must be > 0")
        if name == "max_point_ambiguity" and axis[0] < 0:
            raise InvalidBounds("max_point_ambiguity must be >= 0")
    rng = random.Random(cfg.rng_seed)
    cache: dict[tuple[int, ...], Trial] = {}

    def evaluate(idx):
        if idx not in cache:
            p = grid.params(idx)
            cache[idx] = Trial(p, objective(p, training, search, predicate, lexicon, direction))
        return cache[idx]

    current = grid.nearest(cfg.initial)
    cur_trial = evaluate(current)
    best = cur_trial
    history = [HistoryRow(0, cfg.initial_temperature, cur_trial, True)]
    free = grid.free()
    if not free:
        return best, history

    step = 0
    for level in range(cfg.temperature_levels()):
        temperature = cfg.initial_temperature * cfg.cooling_rate ** level
        for _ in range(cfg.steps_per_temperature):
            step += 1
            k = rng.choice(free)
            delta_idx = rng.choice((-1, 1))
            proposal = list(current)
            proposal[k] = min(max(proposal[k] + delta_idx, 0), len(grid.axes[k]) - 1)
            proposal = tuple(proposal)
            trial = evaluate(proposal)
            delta = trial.objective - cur_trial.objective
            if delta < 0:
                accepted = True
            else:
                accepted = rng.random() < math.exp(-delta / temperature)
            if accepted:
                current, cur_trial = proposal, trial
            if trial.objective < best.objective:
                best = trial
            history.append(HistoryRow(step, temperature, trial, accepted))
    return best, history


def history_tsv(history: Sequence[HistoryRow]) -> str:
    lines = ["step\ttemperature\tchain_size\tdispersal\tangle_deg\tambiguity\tobjective\taccepted"]
    for row in history:
        p = row.trial.params
        lines.append(f"{row.step}\t{row.temperature:.6g}\t{p.chain_size}\t{p.max_point_dispersal:.6g}\t"
                     f"{p.max_angle_deviation_deg:.6g}\t{p.max_point_ambiguity}\t"
                     f"{row.trial.objective:.6f}\t{int(row.accepted)}")
    return "\n".join(lines) + "\n"


def parse_bounds(text: str) -> dict[str, ParamRange]:
    """Lines of ``name: low high step``; omitted names keep their defaults."""
    bounds = dict(DEFAULT_BOUNDS)
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, rest = line.partition(":")
        name = name.strip()
        if not sep or name not in PARAM_NAMES:
            raise InvalidBounds(f"bad bounds line: {raw!r}")
        try:
            low, high, step = (float(v) for v in rest.split())
        except ValueError:
            raise InvalidBounds(f"bad bounds line: {raw!r}") from None
        bounds[name] = ParamRange(low, high, step)
        bounds[name].values()
    return bounds


def load_bounds(path: str | Path) -> dict[str, ParamRange]:
    return parse_bounds(Path(path).read_text(encoding="utf-8"))
